use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mapgf::boundary::rooted_maps_gf;
use mapgf::error::{BoundaryError, OracleError};
use mapgf::verify::{run, Suite, VerifyConfig};
use mapgf::{
    bdg_forward, compute_rp, compute_t, compute_tp, gf_boundaries, slicings_count, validate_mobile, BoundarySpec, Error,
    ParseError, PlanarMap, Series, TruncationSpec,
};

macro_rules! emit {
    ($out:ident, $($arg:tt)*) => {{
        $out.push_str(&format!($($arg)*));
        $out.push('\n');
    }};
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_PARITY: u8 = 4;

#[derive(Parser)]
#[command(name = "mapgf", version, about = "Generating functions of planar maps and constellations with boundaries")]
struct Cli {
    /// Default settings as `key = value` lines; flags override them.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    /// The kernel `R_p`.
    #[value(name = "R")]
    R,
    /// The blossoming tree series `T_p`.
    #[value(name = "T")]
    T,
    /// Rooted maps (`p = 2`).
    #[value(name = "M")]
    M,
    /// Rooted p-constellations.
    #[value(name = "C")]
    C,
}

#[derive(clap::Args)]
struct Bounds {
    #[arg(long)]
    t_max: Option<u32>,
    #[arg(long)]
    xdeg_max: Option<u32>,
    /// Largest index `i` of the variables `x_i` (defaults to `t-max`).
    #[arg(long)]
    var_max: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a kernel or rooted-map series.
    Series {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_enum, default_value = "R")]
        which: Which,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the generating function of maps with the given boundaries.
    Gf {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        boundaries: Vec<u32>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Count maps whose faces are exactly the given rooted boundaries.
    Count {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        boundaries: Vec<u32>,
    },
    /// Apply the BDG bijection to a vertex-pointed planar map.
    Bdg {
        /// Map in JSON: `{"n_darts": .., "sigma": [..], "pointed_vertex": ..}`.
        #[arg(long)]
        map: PathBuf,
        /// Pointed vertex; overrides `pointed_vertex` in the file.
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Run verification suites.
    Verify {
        /// slicings, gf-coeff, kernels, eynard, lemmas, bijections or all.
        #[arg(default_value = "all")]
        suite: String,
        /// Restrict to these values of p.
        #[arg(long, value_delimiter = ',')]
        p: Vec<u32>,
        /// Budget preset: small or default.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        max_light: Option<usize>,
        #[arg(long)]
        max_darts: Option<usize>,
        #[arg(long)]
        t_max: Option<u32>,
        #[arg(long)]
        xdeg_max: Option<u32>,
        /// Any other setting, as `key=value`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        settings: Vec<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Boundary(BoundaryError::UnsupportedParity { .. }) => EXIT_PARITY,
            Error::Oracle(OracleError::BudgetExceeded(_)) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::usage(e.to_string())
    }
}

fn read_config(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
        out.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

/// Settings from the preset, then the config file, then `flags`.
fn build_config(
    file: &[(String, String)],
    budget: Option<&str>,
    flags: &[(String, String)],
) -> Result<VerifyConfig, Failure> {
    let preset = budget.or_else(|| file.iter().find(|(k, _)| k == "budget").map(|(_, v)| v.as_str()));
    let mut cfg = match preset {
        Some(name) => VerifyConfig::preset(name)?,
        None => VerifyConfig::default(),
    };
    for (k, v) in file.iter().filter(|(k, _)| k != "budget").chain(flags) {
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

fn truncation(bounds: &Bounds, cfg: &VerifyConfig) -> Result<TruncationSpec, Failure> {
    let t = bounds.t_max.unwrap_or(cfg.t_max);
    let x = bounds.xdeg_max.unwrap_or(cfg.xdeg_max);
    let spec = match bounds.var_max {
        Some(v) => TruncationSpec::new(t, x, v),
        None => TruncationSpec::with_default_vars(t, x),
    };
    spec.map_err(|e| Failure::usage(e.to_string()))
}

fn render_series(s: &Series, as_json: bool) -> String {
    if as_json {
        serde_json::to_string_pretty(&s.to_json()).expect("series serializes") + "\n"
    } else {
        s.to_text()
    }
}

fn check_p(p: u32) -> Result<(), Failure> {
    if p < 2 {
        return Err(Failure::usage(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

/// Runs the command; returns the exit code and what to print.
fn execute(cli: Cli) -> Result<(u8, String), Failure> {
    let mut out = String::new();
    let file = match &cli.config {
        Some(path) => read_config(path)?,
        None => Vec::new(),
    };
    let base = build_config(&file, None, &[])?;
    match cli.command {
        Command::Series { p, which, bounds } => {
            check_p(p)?;
            let trunc = truncation(&bounds, &base)?;
            let s = match which {
                Which::R => compute_rp(p, trunc),
                Which::T if p == 2 => compute_t(trunc),
                Which::T => compute_tp(p, trunc),
                Which::M | Which::C => rooted_maps_gf(p, trunc),
            }
            .map_err(Error::from)?;
            out = render_series(&s, cli.json);
        }
        Command::Gf { p, boundaries, bounds } => {
            let spec = BoundarySpec::new(p, boundaries).map_err(Error::from)?;
            let trunc = truncation(&bounds, &base)?;
            let s = gf_boundaries(&spec, trunc).map_err(Error::from)?;
            out = render_series(&s, cli.json);
        }
        Command::Count { p, boundaries } => {
            let spec = BoundarySpec::new(p, boundaries.clone()).map_err(Error::from)?;
            let n = slicings_count(&spec).map_err(Error::from)?;
            if cli.json {
                emit!(out, "{}", json!({ "p": p, "boundaries": boundaries, "count": n.to_string() }));
            } else {
                emit!(out, "{n}");
            }
        }
        Command::Bdg { map, vertex } => {
            let text = fs::read_to_string(&map).map_err(|e| Failure::usage(format!("{}: {e}", map.display())))?;
            let m = PlanarMap::from_json(&text)?;
            let v0 = vertex
                .or(m.pointed_vertex())
                .ok_or_else(|| Failure::usage("no pointed vertex: pass --vertex or set pointed_vertex"))?;
            let mobile = bdg_forward(&m, v0).map_err(Error::from)?;
            let class = validate_mobile(&mobile, 2);
            let mut faces = m.face_degrees();
            faces.sort_unstable();
            let blacks = mobile.black_degrees();
            let matches = faces == blacks && mobile.whites() + 1 == m.n_vertices();
            if cli.json {
                let doc = json!({
                    "mobile": mobile.to_json_value(),
                    "report": {
                        "class": class.to_string(),
                        "map_vertices": m.n_vertices(),
                        "white_vertices": mobile.whites(),
                        "face_degrees": faces,
                        "black_degrees": blacks,
                        "degrees_match": matches,
                    }
                });
                emit!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            } else {
                emit!(out, "{}", mobile.to_json());
                emit!(out, "class: {class}");
                emit!(out, "vertices: {} map, {} white (pointed vertex {v0} removed)", m.n_vertices(), mobile.whites());
                emit!(out, "face degree | black degree");
                for (f, b) in faces.iter().zip(&blacks) {
                    emit!(out, "{f} | {b}");
                }
                emit!(out, "degrees match: {matches}");
            }
        }
        Command::Verify { suite, p, budget, max_edges, max_light, max_darts, t_max, xdeg_max, settings } => {
            let suites = Suite::parse_list(&suite)?;
            let mut flags: Vec<(String, String)> = Vec::new();
            if !p.is_empty() {
                let list: Vec<String> = p.iter().map(u32::to_string).collect();
                flags.push(("p".into(), list.join(",")));
            }
            let named = [
                ("max_edges", max_edges.map(|x| x.to_string())),
                ("max_light", max_light.map(|x| x.to_string())),
                ("max_darts", max_darts.map(|x| x.to_string())),
                ("t_max", t_max.map(|x| x.to_string())),
                ("xdeg_max", xdeg_max.map(|x| x.to_string())),
            ];
            for (k, v) in named {
                if let Some(v) = v {
                    flags.push((k.into(), v));
                }
            }
            for s in &settings {
                let (k, v) = s.split_once('=').ok_or_else(|| Failure::usage(format!("--set {s}: expected KEY=VALUE")))?;
                flags.push((k.to_string(), v.to_string()));
            }
            let cfg = build_config(&file, budget.as_deref(), &flags)?;
            let report = run(&suites, &cfg);
            if cli.json {
                out.push_str(&report.to_json());
                out.push('\n');
            } else {
                out.push_str(&report.to_text());
            }
            let code = match report.exit_code() {
                0 => 0,
                1 => EXIT_VERIFY,
                _ => EXIT_BUDGET,
            };
            return Ok((code, out));
        }
    }
    Ok((0, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok((code, out)) => {
            // a closed pipe is not an error of ours
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
