//! Verification suites: closed forms against exhaustive oracles, series
//! identities, and exhaustive checks of the bijections.
//!
//! Every check produces [`Case`]s with an expected and an obtained value.
//! Cases whose oracle would exceed the configured budget are reported with
//! [`Status::Budget`] instead of failing.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bijection::{aggregate, bdg_forward_rooted, blossoming_to_mobile, disaggregate, mobile_to_blossoming};
use crate::boundary::{
    alpha, evaluation_at_origin, eynard_three, eynard_two, gf_boundaries, rooted_maps_gf, slicings_count, BoundarySpec,
};
use crate::error::{Error, OracleError, ParseError};
use crate::kernel::{compute_r, compute_rp, compute_t, compute_tp, lagrange_coeff};
use crate::mobile::{prune, validate_mobile, Mobile, MobileClass, MobileForest, NodeKind};
use crate::numeric::{binomial, factorial, format_rational, int_to_rational, Integer, Rational};
use crate::oracle::families::{compare_families, family_counts, Family, FamilyBudget, Profile};
use crate::oracle::{
    blossoming_trees, count_maps, oracle_rooted_count, rooted_mobile_counts, rooted_pointed_maps, MapOracle, MapQuery,
    MobileGenerator, SearchBudget,
};
use crate::series::{Monomial, Series, TruncationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Slicings,
    GfCoeff,
    Kernels,
    Eynard,
    Lemmas,
    Bijections,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Slicings, Suite::GfCoeff, Suite::Kernels, Suite::Eynard, Suite::Lemmas, Suite::Bijections];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Slicings => "slicings",
            Suite::GfCoeff => "gf-coeff",
            Suite::Kernels => "kernels",
            Suite::Eynard => "eynard",
            Suite::Lemmas => "lemmas",
            Suite::Bijections => "bijections",
        }
    }

    /// Parses a suite name; `all` gives every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, ParseError> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ParseError::Invalid(format!("unknown suite '{s}'")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Budget => "BUDGET",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub suite: Suite,
    pub id: String,
    pub expected: String,
    pub got: String,
    pub status: Status,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: expected {}, got {}", self.status, self.id, self.expected, self.got)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub cases: Vec<Case>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.status == Status::Pass)
    }

    /// 0 if every case passes, 1 on any failure, 3 if some case only ran
    /// out of budget.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Budget) > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} cases: {} passed, {} failed, {} over budget\n",
            self.cases.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Budget)
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Budgets and truncations of the suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Restrict the suites to these values of `p`.
    pub ps: Option<Vec<u32>>,
    /// Edges of the bipartite maps (`p = 2`) checked against the census.
    pub max_edges: usize,
    /// Total light degree of the `p >= 3` hypermaps checked.
    pub max_light: usize,
    pub max_darts: usize,
    pub t_max: u32,
    pub xdeg_max: u32,
    pub kernel_t_max: u32,
    pub kernel_xdeg_max: u32,
    pub eynard_two_sum: u32,
    pub eynard_three_sum: u32,
    pub catalan_max: u32,
    /// Whites and light vertices of the mobiles in the family identities.
    pub family_whites: usize,
    pub family_lights: usize,
    /// Largest boundary total in the quasi-reduction series identities, in
    /// units of `p`.
    pub quasi_units: u32,
    pub blossom_internal: usize,
    /// Largest index `i` of an internal vertex of arity `(p-1)i`.
    pub blossom_index_p2: usize,
    pub blossom_index: usize,
    pub bdg_edges: usize,
    pub aggregate_whites: usize,
    pub aggregate_blacks: usize,
    pub aggregate_components: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            ps: None,
            max_edges: 4,
            max_light: 6,
            max_darts: SearchBudget::default().max_darts,
            t_max: 8,
            xdeg_max: 3,
            kernel_t_max: 6,
            kernel_xdeg_max: 3,
            eynard_two_sum: 10,
            eynard_three_sum: 12,
            catalan_max: 6,
            family_whites: 4,
            family_lights: 3,
            quasi_units: 5,
            blossom_internal: 4,
            blossom_index_p2: 3,
            blossom_index: 2,
            bdg_edges: 4,
            aggregate_whites: 6,
            aggregate_blacks: 1,
            aggregate_components: 4,
        }
    }
}

impl VerifyConfig {
    /// A lighter configuration for quick runs.
    pub fn small() -> Self {
        VerifyConfig {
            max_edges: 3,
            max_light: 3,
            t_max: 6,
            kernel_t_max: 4,
            eynard_two_sum: 6,
            eynard_three_sum: 8,
            family_whites: 3,
            family_lights: 3,
            quasi_units: 4,
            blossom_internal: 3,
            bdg_edges: 3,
            aggregate_whites: 4,
            aggregate_components: 3,
            ..VerifyConfig::default()
        }
    }

    /// `small` or `default`.
    pub fn preset(name: &str) -> Result<Self, ParseError> {
        match name {
            "small" => Ok(VerifyConfig::small()),
            "default" | "full" => Ok(VerifyConfig::default()),
            _ => Err(ParseError::Invalid(format!("unknown budget preset '{name}'"))),
        }
    }

    /// Sets a field from a `key = value` pair (keys use dashes or
    /// underscores).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ParseError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let num = || -> Result<usize, ParseError> {
            value.parse().map_err(|_| ParseError::Invalid(format!("{key}: '{value}' is not a number")))
        };
        match key.as_str() {
            "p" | "ps" => {
                let ps = value
                    .split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| ParseError::Invalid(format!("p: '{value}' is not a list of integers")))?;
                if ps.iter().any(|&p| p < 2) {
                    return Err(ParseError::Invalid("p must be at least 2".into()));
                }
                self.ps = Some(ps);
            }
            "budget" => *self = VerifyConfig { ps: self.ps.clone(), ..VerifyConfig::preset(value)? },
            "max_edges" => self.max_edges = num()?,
            "max_light" => self.max_light = num()?,
            "max_darts" => self.max_darts = num()?,
            "t_max" => self.t_max = num()? as u32,
            "xdeg_max" => self.xdeg_max = num()? as u32,
            "kernel_t_max" => self.kernel_t_max = num()? as u32,
            "kernel_xdeg_max" => self.kernel_xdeg_max = num()? as u32,
            "eynard_two_sum" => self.eynard_two_sum = num()? as u32,
            "eynard_three_sum" => self.eynard_three_sum = num()? as u32,
            "catalan_max" => self.catalan_max = num()? as u32,
            "family_whites" => self.family_whites = num()?,
            "family_lights" => self.family_lights = num()?,
            "quasi_units" => self.quasi_units = num()? as u32,
            "blossom_internal" => self.blossom_internal = num()?,
            "blossom_index_p2" => self.blossom_index_p2 = num()?,
            "blossom_index" => self.blossom_index = num()?,
            "bdg_edges" => self.bdg_edges = num()?,
            "aggregate_whites" => self.aggregate_whites = num()?,
            "aggregate_blacks" => self.aggregate_blacks = num()?,
            "aggregate_components" => self.aggregate_components = num()?,
            _ => return Err(ParseError::Invalid(format!("unknown setting '{key}'"))),
        }
        Ok(())
    }

    fn ps_or(&self, default: &[u32]) -> Vec<u32> {
        self.ps.clone().unwrap_or_else(|| default.to_vec())
    }

    fn trunc(&self) -> TruncationSpec {
        TruncationSpec::with_default_vars(self.t_max, self.xdeg_max).expect("valid truncation")
    }

    fn family_budget(&self) -> FamilyBudget {
        FamilyBudget { whites: self.family_whites, lights: self.family_lights }
    }

    fn search_budget(&self) -> SearchBudget {
        SearchBudget { max_darts: self.max_darts }
    }

    /// Light degree totals checked for `p`: `2, 4, .., 2 * max_edges` for
    /// `p = 2`, multiples of `p` up to `max_light` otherwise.
    fn light_totals(&self, p: u32) -> Vec<u32> {
        let top = if p == 2 { 2 * self.max_edges as u32 } else { self.max_light as u32 };
        (1..).map(|k| k * p).take_while(|&l| l <= top).collect()
    }
}

/// Runs the suites in order.
pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Report {
    let oracle = MapOracle::new(cfg.search_budget());
    let mut cases = Vec::new();
    for &s in suites {
        cases.extend(run_suite_with(s, cfg, &oracle));
    }
    Report { cases }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Case> {
    run_suite_with(suite, cfg, &MapOracle::new(cfg.search_budget()))
}

fn run_suite_with(suite: Suite, cfg: &VerifyConfig, oracle: &MapOracle) -> Vec<Case> {
    let mut out = Vec::new();
    match suite {
        Suite::Slicings => {
            for p in cfg.ps_or(&[2, 3]) {
                out.extend(slicings_cases(p, cfg, oracle));
                out.extend(evaluation_cases(p, cfg));
            }
            if cfg.ps_or(&[2]).contains(&2) {
                out.extend(catalan_cases(cfg.catalan_max));
            }
        }
        Suite::GfCoeff => {
            for p in cfg.ps_or(&[2, 3]) {
                out.extend(gf_coeff_cases(p, cfg, oracle));
            }
        }
        Suite::Kernels => {
            for p in cfg.ps_or(&[2, 3, 4]) {
                out.extend(kernel_cases(p, cfg.kernel_t_max, cfg.kernel_xdeg_max));
                out.extend(rooted_map_cases(p, cfg, oracle));
            }
        }
        Suite::Eynard => {
            if cfg.ps_or(&[2]).contains(&2) {
                out.extend(eynard_cases(cfg));
            }
        }
        Suite::Lemmas => {
            for p in cfg.ps_or(&[2, 3]) {
                out.extend(quasi_series_cases(p, cfg));
                out.extend(family_cases(p, cfg));
            }
        }
        Suite::Bijections => {
            for p in cfg.ps_or(&[2, 3]) {
                out.extend(blossoming_series_cases(p, cfg));
                let index = if p == 2 { cfg.blossom_index_p2 } else { cfg.blossom_index };
                out.extend(blossoming_bijection_cases(p, cfg.blossom_internal, index));
                out.extend(aggregation_cases(p, cfg));
            }
            if cfg.ps_or(&[2]).contains(&2) {
                out.extend(bdg_cases(cfg.bdg_edges));
            }
        }
    }
    out
}

struct Cases {
    suite: Suite,
    out: Vec<Case>,
}

impl Cases {
    fn new(suite: Suite) -> Self {
        Cases { suite, out: Vec::new() }
    }

    fn push(&mut self, id: String, expected: String, got: String, status: Status) {
        self.out.push(Case { suite: self.suite, id, expected, got, status });
    }

    fn check<T: PartialEq + fmt::Display>(&mut self, id: String, expected: T, got: T) {
        let status = if expected == got { Status::Pass } else { Status::Fail };
        self.push(id, expected.to_string(), got.to_string(), status);
    }

    fn check_rational(&mut self, id: String, expected: &Rational, got: &Rational) {
        let status = if expected == got { Status::Pass } else { Status::Fail };
        self.push(id, format_rational(expected), format_rational(got), status);
    }

    /// Records a comparison whose sides may have failed.
    fn check_results<T: PartialEq + fmt::Display>(
        &mut self,
        id: String,
        expected: Result<T, Error>,
        got: Result<T, Error>,
    ) {
        match (expected, got) {
            (Ok(e), Ok(g)) => self.check(id, e, g),
            (e, g) => {
                let over = [e.as_ref().err(), g.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .any(|x| matches!(x, Error::Oracle(OracleError::BudgetExceeded(_))));
                let show = |r: Result<T, Error>| match r {
                    Ok(v) => v.to_string(),
                    Err(x) => format!("error: {x}"),
                };
                self.push(id, show(e), show(g), if over { Status::Budget } else { Status::Fail });
            }
        }
    }

    fn fail(&mut self, id: String, what: String) {
        self.push(id, "success".into(), what, Status::Fail);
    }

    /// A pass/fail case whose description is `detail`.
    fn assert(&mut self, id: String, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, "holds".into(), detail, status);
    }

    fn series(&mut self, id: String, expected: Result<Series, Error>, got: Result<Series, Error>) {
        match (expected, got) {
            (Ok(a), Ok(b)) => match series_difference(&a, &b) {
                Ok(None) => {
                    let n = a.terms().filter(|(m, _)| b.trunc().admits(m)).count();
                    self.push(id, format!("{n} terms"), "equal".into(), Status::Pass);
                }
                Ok(Some((m, x, y))) => {
                    self.push(id, format!("{m} : {}", format_rational(&x)), format_rational(&y), Status::Fail)
                }
                Err(e) => self.fail(id, e.to_string()),
            },
            (a, b) => {
                let err = a.err().or(b.err()).expect("one side failed");
                self.fail(id, err.to_string());
            }
        }
    }
}

/// Restricts both series to their common truncation and returns the first
/// monomial where they differ.
fn series_difference(a: &Series, b: &Series) -> Result<Option<(Monomial, Rational, Rational)>, Error> {
    let (ta, tb) = (a.trunc(), b.trunc());
    let common = TruncationSpec::new(
        ta.t_max.min(tb.t_max),
        ta.xdeg_max.min(tb.xdeg_max),
        ta.var_max.min(tb.var_max),
    )?;
    let a = a.restrict(common)?;
    let b = b.restrict(common)?;
    let keys: BTreeSet<Monomial> = a.terms().chain(b.terms()).map(|(m, _)| *m).collect();
    for m in keys {
        let (x, y) = (a.coeff(&m)?, b.coeff(&m)?);
        if x != y {
            return Ok(Some((m, x, y)));
        }
    }
    Ok(None)
}

/// Partitions of `n` into parts in nondecreasing order.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in min..=n {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

fn show_list(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn show_profile(p: u32, internal: &BTreeMap<u32, u32>) -> String {
    if internal.is_empty() {
        return "-".into();
    }
    internal.iter().map(|(i, n)| format!("{}^{n}", p * i)).collect::<Vec<_>>().join(" ")
}

/// `oracle_slicings = slicings_count` for every admissible boundary
/// multiset with light total in range.
pub fn slicings_cases(p: u32, cfg: &VerifyConfig, oracle: &MapOracle) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Slicings);
    for total in cfg.light_totals(p) {
        for b in partitions(total) {
            let Ok(spec) = BoundarySpec::new(p, b.clone()) else { continue };
            let id = format!("slicings p={p} [{}]", show_list(&b));
            let expected = slicings_count(&spec).map_err(Error::from);
            let got = count_maps(oracle, &MapQuery::new(p, &b)).map_err(Error::from);
            cs.check_results(id, expected, got);
        }
    }
    cs.out
}

/// The `x`-free part of the boundary series is `A t^v`, and its value at
/// `t = 1` is the closed-form evaluation.
pub fn evaluation_cases(p: u32, cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Slicings);
    for total in cfg.light_totals(p) {
        for b in partitions(total) {
            let Ok(spec) = BoundarySpec::new(p, b.clone()) else { continue };
            let q = spec.derived();
            let Ok(count) = slicings_count(&spec) else { continue };
            let t_max = (q.v + spec.r() as i64 + 1) as u32;
            let trunc = TruncationSpec::new(t_max, 0, 1).expect("valid truncation");
            let id = format!("evaluation p={p} [{}]", show_list(&b));
            match gf_boundaries(&spec, trunc) {
                Ok(g) => {
                    let terms: Vec<String> =
                        g.x_free().terms().map(|(m, c)| format!("{m} : {}", format_rational(c))).collect();
                    let want = format!("{} : {count}/1", Monomial::t_pow(q.v as u32));
                    cs.check(id.clone(), want, terms.join(" + "));
                }
                Err(e) => cs.fail(id.clone(), e.to_string()),
            }
            cs.check_rational(format!("{id} at t=1"), &int_to_rational(count), &evaluation_at_origin(&spec));
        }
    }
    cs.out
}

/// `slicings_count(2, [2a]) = binomial(2a, a) / (a + 1)`.
pub fn catalan_cases(max_a: u32) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Slicings);
    for a in 1..=max_a {
        let spec = BoundarySpec::new(2, vec![2 * a]).expect("even boundary");
        let catalan = binomial(2 * a as u64, a as i64) / Integer::from(a + 1);
        cs.check_results(format!("catalan a={a}"), Ok(catalan), slicings_count(&spec).map_err(Error::from));
    }
    cs.out
}

/// Coefficients of `G^(p)` against map counts, for every split of a light
/// multiset into boundaries and internal faces and every vertex count.
pub fn gf_coeff_cases(p: u32, cfg: &VerifyConfig, oracle: &MapOracle) -> Vec<Case> {
    let mut cs = Cases::new(Suite::GfCoeff);
    let mut series: HashMap<Vec<u32>, Result<Series, Error>> = HashMap::new();
    for total in cfg.light_totals(p) {
        let top = total / p;
        for parts in partitions(total) {
            for (b, internal) in boundary_splits(p, &parts) {
                if BoundarySpec::new(p, b.clone()).is_err() {
                    continue;
                }
                let key: Vec<u32> = std::iter::once(total).chain(b.iter().copied()).collect();
                let g = series.entry(key).or_insert_with(|| {
                    let spec = BoundarySpec::new(p, b.clone()).expect("checked above");
                    let trunc = TruncationSpec::new(total + 2 + b.len() as u32, top, top.max(1))?;
                    Ok(gf_boundaries(&spec, trunc)?)
                });
                let label = format!("gf p={p} [{}] internal {}", show_list(&b), show_profile(p, &internal));
                let g = match g {
                    Ok(g) => g,
                    Err(e) => {
                        cs.fail(label, e.to_string());
                        continue;
                    }
                };
                let xs: Vec<(u32, u32)> = internal.iter().map(|(&i, &n)| (i, n)).collect();
                for v in 1..=g.trunc().t_max {
                    let m = Monomial::new(v, &xs);
                    let coeff = match g.coeff(&m) {
                        Ok(c) => c,
                        Err(e) => {
                            cs.fail(format!("{label} v={v}"), e.to_string());
                            continue;
                        }
                    };
                    let q = MapQuery::new(p, &b).with_internal(internal.clone()).with_vertices(v as usize);
                    match count_maps(oracle, &q) {
                        Ok(n) => {
                            let n = int_to_rational(n);
                            if coeff != Rational::from_integer(0.into()) || n != Rational::from_integer(0.into()) {
                                cs.check_rational(format!("{label} v={v}"), &coeff, &n);
                            }
                        }
                        Err(e) => {
                            let status =
                                if matches!(e, OracleError::BudgetExceeded(_)) { Status::Budget } else { Status::Fail };
                            cs.push(format!("{label} v={v}"), format_rational(&coeff), format!("error: {e}"), status);
                        }
                    }
                }
            }
        }
    }
    cs.out
}

/// Ways to take some parts that are multiples of `p` as internal faces,
/// keeping at least one boundary.
fn boundary_splits(p: u32, parts: &[u32]) -> Vec<(Vec<u32>, BTreeMap<u32, u32>)> {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &x in parts {
        *mult.entry(x).or_insert(0) += 1;
    }
    let mut out = vec![(Vec::new(), BTreeMap::new())];
    for (&x, &n) in &mult {
        let mut next = Vec::new();
        for (b, internal) in &out {
            let max_internal = if x % p == 0 { n } else { 0 };
            for k in 0..=max_internal {
                let mut b2: Vec<u32> = b.clone();
                b2.extend(std::iter::repeat(x).take((n - k) as usize));
                let mut i2: BTreeMap<u32, u32> = internal.clone();
                if k > 0 {
                    i2.insert(x / p, k);
                }
                next.push((b2, i2));
            }
        }
        out = next;
    }
    out.retain(|(b, _)| !b.is_empty());
    out
}

/// Fixed-point coefficients of `R_p` against Lagrange inversion and the
/// mobile generator, for every monomial with `t_exp <= t_max` and x-degree
/// `<= xdeg_max`.
pub fn kernel_cases(p: u32, t_max: u32, xdeg_max: u32) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Kernels);
    let trunc = TruncationSpec::new(t_max, xdeg_max, t_max.max(1)).expect("valid truncation");
    let r = match compute_rp(p, trunc) {
        Ok(r) => r,
        Err(e) => {
            cs.fail(format!("kernel p={p}"), e.to_string());
            return cs.out;
        }
    };
    let mut gen = MobileGenerator::new(p, (p * (t_max + 1)) as usize, false);
    for n in 1..=t_max {
        for b in 0..=xdeg_max {
            let mobiles = rooted_mobile_counts(&mut gen, p, n as usize, b as usize);
            let mut keys: BTreeSet<Monomial> = mobiles
                .keys()
                .map(|degrees| {
                    let idx: Vec<u32> = degrees.iter().map(|&d| d as u32 / p).collect();
                    Monomial::from_indices(n, &idx)
                })
                .collect();
            keys.extend(r.terms().map(|(m, _)| *m).filter(|m| m.t_exp() == n && m.x_degree() == b));
            for m in keys {
                let profile: BTreeMap<u32, u32> = m.x_exps().into_iter().collect();
                let degrees: Vec<usize> = m.indices().iter().map(|&i| (i * p) as usize).collect();
                let fixpoint = r.coeff(&m).expect("monomial within truncation");
                let lagrange = lagrange_coeff(p, 1, n, &profile);
                let count = int_to_rational(Integer::from(mobiles.get(&degrees).copied().unwrap_or(0)));
                cs.check_rational(format!("kernel p={p} {m} lagrange"), &fixpoint, &lagrange);
                cs.check_rational(format!("kernel p={p} {m} mobiles"), &fixpoint, &count);
            }
        }
    }
    cs.out
}

/// Coefficients of the rooted map series (`M` for `p = 2`, `C_p`
/// otherwise) against the census.
pub fn rooted_map_cases(p: u32, cfg: &VerifyConfig, oracle: &MapOracle) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Kernels);
    for total in cfg.light_totals(p) {
        let top = total / p;
        let trunc = TruncationSpec::new(total + 2, top, top).expect("valid truncation");
        let series = match rooted_maps_gf(p, trunc) {
            Ok(s) => s,
            Err(e) => {
                cs.fail(format!("rooted p={p} total={total}"), e.to_string());
                continue;
            }
        };
        for parts in partitions(top) {
            let mut internal: BTreeMap<u32, u32> = BTreeMap::new();
            for &i in &parts {
                *internal.entry(i).or_insert(0) += 1;
            }
            let xs: Vec<(u32, u32)> = internal.iter().map(|(&i, &n)| (i, n)).collect();
            for v in 1..=series.trunc().t_max {
                let m = Monomial::new(v, &xs);
                let id = format!("rooted p={p} faces {} v={v}", show_profile(p, &internal));
                let coeff = series.coeff(&m).map_err(Error::from);
                let got = oracle_rooted_count(oracle, p, v as usize, &internal).map(int_to_rational).map_err(Error::from);
                let zero = Rational::from_integer(0.into());
                if matches!((&coeff, &got), (Ok(a), Ok(b)) if *a == zero && *b == zero) {
                    continue;
                }
                match (coeff, got) {
                    (Ok(a), Ok(b)) => cs.check_rational(id, &a, &b),
                    (a, b) => cs.check_results(
                        id,
                        a.map(|q| format_rational(&q)),
                        b.map(|q| format_rational(&q)),
                    ),
                }
            }
        }
    }
    cs.out
}

/// `G_{l1,l2}` and `G_{l1,l2,l3}` (`p = 2`) against Eynard's formulas.
pub fn eynard_cases(cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Eynard);
    let trunc = cfg.trunc();
    let g = |ls: Vec<u32>| -> Result<Series, Error> {
        let spec = BoundarySpec::new(2, ls)?;
        Ok(gf_boundaries(&spec, trunc)?)
    };
    for l1 in 1..cfg.eynard_two_sum {
        for l2 in 1..=cfg.eynard_two_sum - l1 {
            if (l1 + l2) % 2 == 1 {
                continue;
            }
            cs.series(format!("eynard G_{{{l1},{l2}}}"), eynard_two(l1, l2, trunc), g(vec![l1, l2]));
        }
    }
    for l1 in 1..cfg.eynard_three_sum {
        for l2 in 1..cfg.eynard_three_sum - l1 {
            for l3 in 1..=cfg.eynard_three_sum - l1 - l2 {
                let odd = [l1, l2, l3].iter().filter(|&&l| l % 2 == 1).count();
                if odd != 0 && odd != 2 {
                    continue;
                }
                cs.series(
                    format!("eynard G_{{{l1},{l2},{l3}}}"),
                    eynard_three(l1, l2, l3, trunc),
                    g(vec![l1, l2, l3]),
                );
            }
        }
    }
    cs.out
}

/// Multisets of multiples of `p` with total at most `max` (in units of
/// `p`), at most `max_parts` parts.
fn regular_rests(p: u32, max: u32, max_parts: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for total in 1..=max {
        for parts in partitions(total) {
            if parts.len() <= max_parts {
                out.push(parts.iter().map(|&a| a * p).collect());
            }
        }
    }
    out
}

/// The series identities behind the quasi reduction:
/// `alpha(pa1-d) alpha(pa2+d) (p-1) G_{pa1,pa2,..} = alpha(pa1) alpha(pa2) G_{pa1-d,pa2+d,..}`
/// and `p G_{d,p-d,..} = d(p-d) d/dt G_{p,..}`.
pub fn quasi_series_cases(p: u32, cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Lemmas);
    let trunc = cfg.trunc();
    let g = |ls: &[u32]| -> Result<Series, Error> {
        let spec = BoundarySpec::new(p, ls.to_vec())?;
        Ok(gf_boundaries(&spec, trunc)?)
    };
    let units = cfg.quasi_units;
    let scaled = |s: Result<Series, Error>, k: Integer| s.map(|s| s.scale(&int_to_rational(k)));
    for a1 in 1..units {
        for a2 in a1..=units - a1 {
            for rest in regular_rests(p, units - a1 - a2, 2) {
                for d in 1..p {
                    let mut big: Vec<u32> = vec![p * a1, p * a2];
                    big.extend(&rest);
                    let mut quasi: Vec<u32> = vec![p * a1 - d, p * a2 + d];
                    quasi.extend(&rest);
                    let lhs = alpha(p, p * a1 - d) * alpha(p, p * a2 + d) * Integer::from(p - 1);
                    let rhs = alpha(p, p * a1) * alpha(p, p * a2);
                    cs.series(
                        format!("alpha-reduction p={p} [{}] vs [{}]", show_list(&big), show_list(&quasi)),
                        scaled(g(&big), lhs),
                        scaled(g(&quasi), rhs),
                    );
                }
            }
        }
    }
    for rest in regular_rests(p, units - 1, 2) {
        for d in 1..p {
            let mut small: Vec<u32> = vec![d, p - d];
            small.extend(&rest);
            let mut one: Vec<u32> = vec![p];
            one.extend(&rest);
            let k = d * (p - d);
            cs.series(
                format!("derivative p={p} [{}] vs [{}]", show_list(&small), show_list(&one)),
                scaled(g(&small), Integer::from(p)),
                scaled(g(&one).map(|s| s.d_dt()), Integer::from(k)),
            );
        }
    }
    cs.out
}

/// Cardinality identities between families of marked mobiles, profile by
/// profile within the family budget.
pub fn family_cases(p: u32, cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Lemmas);
    let budget = cfg.family_budget();
    let pu = p as usize;
    let mut compare = |name: String, a: (Family, u64), b: (Family, u64)| {
        let rows = compare_families(p, a, b, budget);
        if rows.iter().all(|(_, x, y)| *x == 0 && *y == 0) {
            cs.push(name, "a covered profile".into(), "none within the family budget".into(), Status::Budget);
            return;
        }
        for (prof, x, y) in rows {
            if x != 0 || y != 0 {
                cs.check(format!("{name} {}", show_family_profile(&prof)), x, y);
            }
        }
    };
    let pairs: Vec<(usize, usize)> = if p == 2 { vec![(1, 1), (1, 2)] } else { vec![(1, 1)] };
    for &(a1, a2) in &pairs {
        for d in 1..pu {
            compare(
                format!("pruned-reduction p={p} {}*B^({},{}) vs Q^({},{})", p - 1, pu * a1, pu * a2, pu * a1 - d, pu * a2 + d),
                (Family::BHat(pu * a1, pu * a2), (p - 1) as u64),
                (Family::QHat(pu * a1 - d, pu * a2 + d), 1),
            );
        }
    }
    if p == 2 {
        // unpruned form: buds are placed in C(2a-1, a) ways at a regular
        // vertex and C(2a-2, a-1), C(2a, a) ways at the odd ones
        for &(a1, a2) in &pairs {
            let (a1u, a2u) = (a1 as u64, a2 as u64);
            let qb = |n: u64, k: u64| u64::try_from(binomial(n, k as i64)).expect("small binomial");
            compare(
                format!("reduction p=2 B({},{}) vs Q({},{})", 2 * a1, 2 * a2, 2 * a1 - 1, 2 * a2 + 1),
                (Family::B(2 * a1, 2 * a2), qb(2 * a1u - 2, a1u - 1) * qb(2 * a2u, a2u)),
                (Family::Q(2 * a1 - 1, 2 * a2 + 1), qb(2 * a1u - 1, a1u) * qb(2 * a2u - 1, a2u)),
            );
        }
    }
    for d in 1..pu {
        compare(format!("Q({d},{}) vs B'({p})", pu - d), (Family::Q(d, pu - d), 1), (Family::BPrime(pu), 1));
    }
    // middle parts against derivatives of the kernel
    let trunc = TruncationSpec::with_default_vars(budget.whites as u32 + 1, budget.lights as u32)
        .expect("valid truncation");
    let (r1, r1r) = match compute_rp(p, trunc) {
        Ok(r) => {
            let r1 = r.d_dt();
            let low = *r1.trunc();
            let r1r = r.restrict(low).and_then(|rr| r1.mul(&rr));
            (r1, r1r)
        }
        Err(e) => {
            cs.fail(format!("middle parts p={p}"), e.to_string());
            return cs.out;
        }
    };
    let r1r = match r1r {
        Ok(s) => s,
        Err(e) => {
            cs.fail(format!("middle parts p={p}"), e.to_string());
            return cs.out;
        }
    };
    let h_scale = int_to_rational(Integer::from(p - 1));
    for (family, series, scale, name) in
        [(Family::H, &r1, h_scale, "H = (p-1) R'"), (Family::K, &r1r, int_to_rational(1.into()), "K = R' R")]
    {
        let counts = family_counts(family, p, budget);
        let mut keys: BTreeSet<Profile> = counts.keys().cloned().collect();
        for (m, _) in series.terms() {
            let prof = Profile::new(m.t_exp() as usize, m.indices().iter().map(|&i| (i * p) as usize).collect());
            keys.insert(prof);
        }
        let mut covered = 0;
        for prof in keys {
            if !budget.covers(family, p, &prof) {
                continue;
            }
            let Some(m) = prof.monomial(p) else {
                cs.fail(format!("{name} p={p} {}", show_family_profile(&prof)), "degree not a multiple of p".into());
                continue;
            };
            covered += 1;
            let want = series.coeff(&m).map(|c| c * &scale).unwrap_or_else(|_| Rational::from_integer(0.into()));
            let got = int_to_rational(Integer::from(counts.get(&prof).copied().unwrap_or(0)));
            cs.check_rational(format!("{name} p={p} {}", show_family_profile(&prof)), &want, &got);
        }
        if covered == 0 {
            cs.fail(format!("{name} p={p}"), "no covered profile".into());
        }
    }
    cs.out
}

fn show_family_profile(prof: &Profile) -> String {
    let degs: Vec<String> = prof.degrees.iter().map(usize::to_string).collect();
    format!("whites={} lights=[{}]", prof.whites, degs.join(","))
}

/// `T = R` (`p = 2`) and `T_p = R_p`.
pub fn blossoming_series_cases(p: u32, cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Bijections);
    let trunc = cfg.trunc();
    if p == 2 {
        cs.series("blossoming T = R".into(), compute_r(trunc).map_err(Error::from), compute_t(trunc).map_err(Error::from));
    }
    cs.series(
        format!("blossoming T_p = R_p p={p}"),
        compute_rp(p, trunc).map_err(Error::from),
        compute_tp(p, trunc).map_err(Error::from),
    );
    cs.out
}

fn regular_class(p: u32) -> MobileClass {
    if p == 2 {
        MobileClass::Bipartite
    } else {
        MobileClass::PRegular
    }
}

/// `blossoming_to_mobile` is a bijection from planted blossoming trees
/// with at most `internal` internal vertices (of index at most
/// `max_index`) onto rooted mobiles with the same profiles.
pub fn blossoming_bijection_cases(p: u32, internal: usize, max_index: usize) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Bijections);
    let mut gen = MobileGenerator::new(p, p as usize * max_index, false);
    for n in 0..=internal {
        let id = format!("blossoming p={p} internal={n} index<={max_index}");
        let trees = blossoming_trees(p, n, max_index);
        let mut by_profile: BTreeMap<(usize, Vec<usize>), u64> = BTreeMap::new();
        let mut codes: HashSet<String> = HashSet::with_capacity(trees.len());
        let mut bad = Vec::new();
        for t in &trees {
            match blossoming_to_mobile(t, p) {
                Ok(m) => {
                    if validate_mobile(&m, p) != regular_class(p)
                        || m.whites() != t.leaves()
                        || m.black_degrees() != t.degrees(p)
                    {
                        bad.push(format!("{t:?} -> {}", m.encode()));
                    }
                    *by_profile.entry((m.whites(), m.black_degrees())).or_insert(0) += 1;
                    codes.insert(m.encode());
                }
                Err(e) => bad.push(format!("{t:?}: {e}")),
            }
        }
        cs.assert(
            format!("{id} valid and profile preserving"),
            bad.is_empty(),
            bad.first().cloned().unwrap_or_else(|| format!("{} trees", trees.len())),
        );
        cs.check(format!("{id} injective"), trees.len(), codes.len());
        // images against every rooted mobile with n black vertices
        let max_whites = 1 + n * ((p as usize - 1) * max_index - 1);
        let mut mobiles: BTreeMap<(usize, Vec<usize>), u64> = BTreeMap::new();
        let mut back_bad = Vec::new();
        for w in 1..=max_whites {
            for s in gen.subtrees(NodeKind::White, None, w, n, 0).iter() {
                let m = s.to_mobile();
                if validate_mobile(&m, p) != regular_class(p) {
                    continue;
                }
                *mobiles.entry((w, m.black_degrees())).or_insert(0) += 1;
                match mobile_to_blossoming(&m, p).and_then(|t| blossoming_to_mobile(&t, p)) {
                    Ok(back) if back.encode() == m.encode() => {}
                    other => back_bad.push(format!("{} -> {other:?}", m.encode())),
                }
            }
        }
        cs.assert(
            format!("{id} inverse round-trip"),
            back_bad.is_empty(),
            back_bad.first().cloned().unwrap_or_else(|| format!("{} mobiles", mobiles.values().sum::<u64>())),
        );
        let keys: BTreeSet<&(usize, Vec<usize>)> = by_profile.keys().chain(mobiles.keys()).collect();
        for k in keys {
            let degs: Vec<String> = k.1.iter().map(usize::to_string).collect();
            cs.check(
                format!("{id} whites={} degrees=[{}]", k.0, degs.join(",")),
                mobiles.get(k).copied().unwrap_or(0),
                by_profile.get(k).copied().unwrap_or(0),
            );
        }
    }
    cs.out
}

/// The rooted BDG bijection on every vertex-pointed rooted planar map with
/// at most `max_edges` edges.
pub fn bdg_cases(max_edges: usize) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Bijections);
    let mut gen = MobileGenerator::new(2, 2 * max_edges, true);
    for e in 1..=max_edges {
        let id = format!("bdg edges={e}");
        let maps = rooted_pointed_maps(e);
        let mut images: BTreeMap<(usize, Vec<usize>), BTreeSet<String>> = BTreeMap::new();
        let mut bad = Vec::new();
        for (map, v0) in &maps {
            let m = match bdg_forward_rooted(map, *v0, 0) {
                Ok(m) => m,
                Err(err) => {
                    bad.push(format!("{:?}: {err}", map.sigma()));
                    continue;
                }
            };
            let mut faces = map.face_degrees();
            faces.sort_unstable();
            let odd = faces.iter().filter(|&&d| d % 2 == 1).count();
            let class = validate_mobile(&m, 2);
            let class_ok = match odd {
                0 => class == MobileClass::Bipartite,
                2 => class == MobileClass::QuasiBipartite,
                _ => class != MobileClass::Invalid,
            };
            if !class_ok || m.whites() + 1 != map.n_vertices() || m.black_degrees() != faces {
                bad.push(format!("{:?} pointed at {v0} -> {} ({class:?})", map.sigma(), m.encode()));
            }
            images.entry((m.whites(), m.black_degrees())).or_default().insert(m.encode());
        }
        cs.assert(
            format!("{id} valid and degree preserving"),
            bad.is_empty(),
            bad.first().cloned().unwrap_or_else(|| format!("{} pointed rooted maps", maps.len())),
        );
        let distinct: usize = images.values().map(BTreeSet::len).sum();
        cs.check(format!("{id} injective"), maps.len(), distinct);
        // generated mobiles with the same number of edges
        let mut mobiles: BTreeMap<(usize, Vec<usize>), u64> = BTreeMap::new();
        for s in gen.all_rooted(NodeKind::Black, e, e + 1, 0) {
            let m = s.to_mobile();
            let degs = m.black_degrees();
            if degs.iter().sum::<usize>() != 2 * e || validate_mobile(&m, 2) == MobileClass::Invalid {
                continue;
            }
            *mobiles.entry((m.whites(), degs)).or_insert(0) += 1;
        }
        let keys: BTreeSet<&(usize, Vec<usize>)> = images.keys().chain(mobiles.keys()).collect();
        for k in keys {
            let degs: Vec<String> = k.1.iter().map(usize::to_string).collect();
            cs.check(
                format!("{id} whites={} faces=[{}]", k.0, degs.join(",")),
                mobiles.get(k).copied().unwrap_or(0),
                images.get(k).map_or(0, |s| s.len() as u64),
            );
        }
    }
    cs.out
}

/// Compositions of `n` into positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All sequences `c` with `c_i < bound(i)`.
fn choice_sequences(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..b).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Ordered lists of `k` distinct items from `items`.
fn arrangements<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let rest: Vec<T> = items.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y).collect();
        for mut tail in arrangements(&rest, k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Forests of `s` white-rooted p-mobiles with at most `whites` white and
/// `blacks` black vertices in total.
fn forests(components: &[(usize, usize, Mobile)], s: usize, whites: usize, blacks: usize) -> Vec<Vec<Mobile>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (w, b, c) in components {
        if *w > whites || *b > blacks {
            continue;
        }
        for mut rest in forests(components, s - 1, whites - w, blacks - b) {
            rest.insert(0, c.clone());
            out.push(rest);
        }
    }
    out
}

type AggKey = (Vec<usize>, usize, Vec<usize>);

fn show_agg_key(k: &AggKey) -> String {
    let degs: Vec<String> = k.2.iter().map(usize::to_string).collect();
    let groups: Vec<String> = k.0.iter().map(usize::to_string).collect();
    format!("a=({}) whites={} unmarked=[{}]", groups.join(","), k.1, degs.join(","))
}

/// Aggregation over every forest within the budget: round trips for all
/// choice sequences, and image counts against the marked, pruned mobiles.
pub fn aggregation_cases(p: u32, cfg: &VerifyConfig) -> Vec<Case> {
    let mut cs = Cases::new(Suite::Bijections);
    let q = p as usize - 1;
    let (tw, tb) = (cfg.aggregate_whites, cfg.aggregate_blacks);
    let max_degree = p as usize * (tw + 1);
    let mut gen = MobileGenerator::new(p, max_degree, false);
    let mut components = Vec::new();
    for w in 1..=tw {
        for b in 0..=tb {
            for s in gen.subtrees(NodeKind::White, None, w, b, 0).iter() {
                let m = s.to_mobile();
                if validate_mobile(&m, p) == regular_class(p) {
                    components.push((w, b, m));
                }
            }
        }
    }
    let mut images: BTreeMap<AggKey, BTreeMap<String, u64>> = BTreeMap::new();
    let mut forest_side: BTreeMap<AggKey, u64> = BTreeMap::new();
    let mut round_trips = 0u64;
    let mut bad: Vec<String> = Vec::new();
    let max_total = cfg.aggregate_components / q;
    for total in 1..=max_total {
        let s = total * q;
        for groups in compositions(total) {
            let r = groups.len();
            let bounds: Vec<usize> = (0..r.saturating_sub(1)).map(|i| r - 1 - i).collect();
            let all_choices = choice_sequences(&bounds);
            for comps in forests(&components, s, tw, tb) {
                let whites: Vec<(usize, usize)> = comps
                    .iter()
                    .enumerate()
                    .flat_map(|(c, m)| (0..m.count_nodes()).filter(move |&v| m.kind(v) == NodeKind::White).map(move |v| (c, v)))
                    .collect();
                for marks in arrangements(&whites, r - 1) {
                    let mut forest = MobileForest { components: comps.clone() };
                    for (k, &(c, v)) in marks.iter().enumerate() {
                        forest.components[c].set_mark(v, Some(k as u32 + 1));
                    }
                    let total_whites = forest.whites();
                    let key: AggKey = (groups.clone(), total_whites + 1 - r, forest.black_degrees());
                    *forest_side.entry(key.clone()).or_insert(0) += 1;
                    for choices in &all_choices {
                        round_trips += 1;
                        match aggregate(&forest, &groups, p, choices) {
                            Ok((m, split)) => {
                                *images.entry(key.clone()).or_default().entry(m.encode()).or_insert(0) += 1;
                                match disaggregate(&m, p, &split) {
                                    Ok(d) if d.forest.encode() == forest.encode()
                                        && d.groups == groups
                                        && d.merge_choices == *choices => {}
                                    other => bad.push(format!(
                                        "{} a={groups:?} c={choices:?}: {other:?}",
                                        forest.encode()
                                    )),
                                }
                                if choices.iter().all(|&c| c == 0) {
                                    check_all_splits(&m, p, &groups, &mut bad);
                                }
                            }
                            Err(e) => bad.push(format!("{} a={groups:?} c={choices:?}: {e}", forest.encode())),
                        }
                    }
                    for (i, &b) in bounds.iter().enumerate() {
                        let mut c = vec![0; bounds.len()];
                        c[i] = b;
                        if aggregate(&forest, &groups, p, &c).is_ok() {
                            bad.push(format!("{} a={groups:?} accepted out-of-range choice {c:?}", forest.encode()));
                        }
                    }
                }
            }
        }
    }
    cs.assert(
        format!("aggregation p={p} round trips"),
        bad.is_empty() && round_trips > 0,
        bad.first().cloned().unwrap_or_else(|| format!("{round_trips} round trips")),
    );
    // every image is hit (r-1)! times
    let mut multiplicity_bad = Vec::new();
    for (key, hits) in &images {
        let want = u64::try_from(factorial(key.0.len() as u64 - 1)).expect("small factorial");
        if let Some((code, n)) = hits.iter().find(|(_, &n)| n != want) {
            multiplicity_bad.push(format!("{} {code} hit {n} times, expected {want}", show_agg_key(key)));
        }
    }
    cs.assert(
        format!("aggregation p={p} (r-1)!-to-one"),
        multiplicity_bad.is_empty(),
        multiplicity_bad.first().cloned().unwrap_or_else(|| format!("{} profiles", images.len())),
    );
    let marked = marked_pruned_mobiles(p, cfg);
    let keys: BTreeSet<&AggKey> = marked.keys().chain(forest_side.keys()).collect();
    for key in keys {
        let id = format!("aggregation p={p} {}", show_agg_key(key));
        let hat = marked.get(key);
        let forests = forest_side.get(key).copied().unwrap_or(0);
        cs.check(format!("{id} |M^| = |F|"), hat.map_or(0, |s| s.len() as u64), forests);
        let image: BTreeSet<&String> = images.get(key).map(|h| h.keys().collect()).unwrap_or_default();
        let target: BTreeSet<&String> = hat.map(|s| s.iter().collect()).unwrap_or_default();
        cs.assert(format!("{id} image = M^"), image == target, format!("{} images", image.len()));
    }
    cs.out
}

/// Splitting with every choice sequence gives back forests that aggregate
/// to the same mobile.
fn check_all_splits(m: &Mobile, p: u32, groups: &[usize], bad: &mut Vec<String>) {
    let r = groups.len();
    let bounds: Vec<usize> = (0..r - 1).map(|i| r - 1 - i).collect();
    for c in choice_sequences(&bounds) {
        match disaggregate(m, p, &c) {
            Ok(d) => match aggregate(&d.forest, &d.groups, p, &d.merge_choices) {
                Ok((back, split)) if back.encode() == m.encode() && split == c => {}
                other => bad.push(format!("{} split {c:?} does not rebuild: {other:?}", m.encode())),
            },
            Err(e) => bad.push(format!("{} split {c:?}: {e}", m.encode())),
        }
    }
}

/// Pruned regular mobiles with black vertices marked `1..=r` of degrees
/// `p a_i`, rooted at a corner of a marked vertex, within the forest
/// budget of [`aggregation_cases`].
fn marked_pruned_mobiles(p: u32, cfg: &VerifyConfig) -> BTreeMap<AggKey, BTreeSet<String>> {
    let q = p as usize - 1;
    let pu = p as usize;
    let (tw, tb) = (cfg.aggregate_whites, cfg.aggregate_blacks);
    let max_total = cfg.aggregate_components / q;
    let mut gen = MobileGenerator::new(p, pu * (tw + 1), false);
    let mut out: BTreeMap<AggKey, BTreeSet<String>> = BTreeMap::new();
    let group_lists: Vec<Vec<usize>> = (1..=max_total).flat_map(compositions).collect();
    let max_r = group_lists.iter().map(Vec::len).max().unwrap_or(0);
    for shape in gen.all_rooted(NodeKind::Black, tw, tb + max_r, 0) {
        let m = shape.to_mobile();
        if validate_mobile(&m, p) != regular_class(p) {
            continue;
        }
        let parent = m.parents();
        let blacks: Vec<usize> = (0..m.count_nodes()).filter(|&v| m.kind(v) == NodeKind::Black).collect();
        for groups in &group_lists {
            let r = groups.len();
            if m.whites() + r - 1 > tw || blacks.len() < r || blacks.len() - r > tb {
                continue;
            }
            for labels in arrangements(&blacks, r) {
                if !labels.contains(&m.root())
                    || labels.iter().zip(groups).any(|(&v, &a)| m.degree(v, &parent) != pu * a)
                {
                    continue;
                }
                let mut mm = m.clone();
                for (i, &v) in labels.iter().enumerate() {
                    mm.set_mark(v, Some(i as u32 + 1));
                }
                let pruned = prune(&mm, &labels);
                let unmarked = mm.black_degrees_except(&labels);
                out.entry((groups.clone(), m.whites(), unmarked)).or_default().insert(pruned.encode());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> VerifyConfig {
        VerifyConfig {
            max_edges: 2,
            max_light: 3,
            t_max: 5,
            kernel_t_max: 3,
            kernel_xdeg_max: 2,
            eynard_two_sum: 4,
            eynard_three_sum: 5,
            catalan_max: 3,
            family_whites: 3,
            family_lights: 3,
            quasi_units: 3,
            blossom_internal: 2,
            blossom_index_p2: 2,
            blossom_index: 2,
            bdg_edges: 2,
            aggregate_whites: 3,
            aggregate_blacks: 1,
            aggregate_components: 2,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn partitions_and_splits() {
        assert_eq!(partitions(4).len(), 5);
        let splits = boundary_splits(2, &[2, 2]);
        // [2,2] with no internal face, [2] with one
        assert_eq!(splits.len(), 2);
        assert_eq!(boundary_splits(3, &[1, 2]).len(), 1);
        assert_eq!(compositions(3).len(), 4);
        assert_eq!(choice_sequences(&[2, 1]).len(), 2);
        assert_eq!(arrangements(&[1, 2, 3], 2).len(), 6);
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert_eq!(Suite::parse_list("gf-coeff").unwrap(), vec![Suite::GfCoeff]);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn config_settings() {
        let mut c = VerifyConfig::default();
        c.set("max-edges", "3").unwrap();
        c.set("p", "2,3").unwrap();
        assert_eq!(c.max_edges, 3);
        assert_eq!(c.ps, Some(vec![2, 3]));
        assert!(c.set("max_edges", "x").is_err());
        assert!(c.set("bogus", "1").is_err());
        c.set("budget", "small").unwrap();
        assert_eq!(c.ps, Some(vec![2, 3]));
        assert_eq!(c.max_edges, VerifyConfig::small().max_edges);
    }

    #[test]
    fn every_suite_passes_on_a_tiny_budget() {
        let report = run(&Suite::ALL, &tiny());
        let failed: Vec<String> = report.cases.iter().filter(|c| c.status != Status::Pass).map(|c| c.to_string()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        for s in Suite::ALL {
            assert!(report.cases.iter().any(|c| c.suite == s), "{s} ran no case");
        }
    }

    #[test]
    fn failures_and_budget_are_reported() {
        let mut cs = Cases::new(Suite::Slicings);
        cs.check("x".into(), 1, 2);
        cs.check_results::<u32>(
            "y".into(),
            Ok(1),
            Err(Error::Oracle(OracleError::BudgetExceeded("too big".into()))),
        );
        let report = Report { cases: cs.out };
        assert_eq!(report.count(Status::Fail), 1);
        assert_eq!(report.count(Status::Budget), 1);
        assert_eq!(report.exit_code(), 1);
        assert!(report.to_text().starts_with("FAIL x: expected 1, got 2"));
        assert!(report.to_json().contains("\"BUDGET\""));
    }

    #[test]
    fn over_budget_oracle_is_not_a_failure() {
        let cfg = VerifyConfig { max_darts: 4, max_edges: 3, ..tiny() };
        let cases = slicings_cases(2, &cfg, &MapOracle::new(cfg.search_budget()));
        assert!(cases.iter().any(|c| c.status == Status::Budget));
        assert!(cases.iter().all(|c| c.status != Status::Fail));
    }
}
