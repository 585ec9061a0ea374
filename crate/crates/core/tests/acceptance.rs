//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! with a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mapgf::oracle::{MapOracle, SearchBudget};
use mapgf::verify::{
    aggregation_cases, bdg_cases, blossoming_bijection_cases, blossoming_series_cases, catalan_cases, eynard_cases,
    family_cases, gf_coeff_cases, kernel_cases, quasi_series_cases, slicings_cases, Case, Status, VerifyConfig,
};

struct Outcome {
    cases: Vec<Case>,
    /// Specific values that must appear as passing cases.
    pinned: Vec<String>,
    limit: Option<Duration>,
}

impl Outcome {
    fn new(cases: Vec<Case>) -> Self {
        Outcome { cases, pinned: Vec::new(), limit: None }
    }

    fn pin(mut self, lines: &[&str]) -> Self {
        self.pinned.extend(lines.iter().map(|s| s.to_string()));
        self
    }

    fn within(mut self, limit: Duration) -> Self {
        self.limit = Some(limit);
        self
    }
}

fn criterion(n: u32, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let mut problems: Vec<String> = out
        .cases
        .iter()
        .filter(|c| c.status != Status::Pass)
        .take(3)
        .map(|c| c.to_string())
        .collect();
    if out.cases.is_empty() {
        problems.push("no cases".into());
    }
    for p in &out.pinned {
        if !out.cases.iter().any(|c| c.status == Status::Pass && c.to_string() == *p) {
            problems.push(format!("missing: {p}"));
        }
    }
    if let Some(limit) = out.limit {
        if elapsed > limit {
            problems.push(format!("took {elapsed:.1?}, limit {limit:?}"));
        }
    }
    let ok = problems.is_empty();
    println!(
        "{} criterion {n}: {name} ({} cases, {elapsed:.1?})",
        if ok { "PASS" } else { "FAIL" },
        out.cases.len()
    );
    for p in problems {
        println!("    {p}");
    }
    ok
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let oracle = MapOracle::new(SearchBudget::default());
    let minute = Duration::from_secs(60);
    let mut ok = true;

    ok &= criterion(1, "slicings equivalence, p = 2, E <= 4", || {
        Outcome::new(slicings_cases(2, &cfg, &oracle))
            .pin(&[
                "PASS slicings p=2 [4]: expected 2, got 2",
                "PASS slicings p=2 [1,1]: expected 1, got 1",
                "PASS slicings p=2 [2,2]: expected 2, got 2",
                "PASS slicings p=2 [1,3]: expected 3, got 3",
                "PASS slicings p=2 [3,3]: expected 12, got 12",
                "PASS slicings p=2 [2,2,2]: expected 8, got 8",
            ])
            .within(minute)
    });
    ok &= criterion(2, "constellation slicings, p = 3, epsilon <= 6", || {
        Outcome::new(slicings_cases(3, &cfg, &oracle))
            .pin(&[
                "PASS slicings p=3 [3]: expected 1, got 1",
                "PASS slicings p=3 [3,3]: expected 9, got 9",
                "PASS slicings p=3 [2,4]: expected 12, got 12",
            ])
            .within(10 * minute)
    });
    ok &= criterion(3, "kernel fixed point = Lagrange inversion = mobiles, p in {2,3,4}", || {
        let mut cases = Vec::new();
        for p in [2, 3, 4] {
            cases.extend(kernel_cases(p, 6, 3));
        }
        Outcome::new(cases)
            .pin(&[
                "PASS kernel p=2 t^2 x2^1 mobiles: expected 3/1, got 3/1",
                "PASS kernel p=2 t^3 x3^1 lagrange: expected 10/1, got 10/1",
            ])
            .within(minute)
    });
    ok &= criterion(4, "boundary series against Eynard's formulas", || {
        Outcome::new(eynard_cases(&cfg)).within(minute)
    });
    ok &= criterion(5, "generating function coefficients against maps", || {
        let mut cases = gf_coeff_cases(2, &cfg, &oracle);
        cases.extend(gf_coeff_cases(3, &cfg, &oracle));
        let quasi = ["gf p=2 [1,3] internal -", "gf p=3 [2,4] internal -"];
        let mut out = Outcome::new(cases);
        for q in quasi {
            if !out.cases.iter().any(|c| c.id.starts_with(q)) {
                out.pinned.push(format!("a case for {q}"));
            }
        }
        out
    });
    ok &= criterion(6, "blossoming trees: T = R, T_p = R_p, exhaustive bijection", || {
        let mut cases = Vec::new();
        for p in [2, 3] {
            cases.extend(blossoming_series_cases(p, &cfg));
            let index = if p == 2 { cfg.blossom_index_p2 } else { cfg.blossom_index };
            cases.extend(blossoming_bijection_cases(p, 4, index));
        }
        Outcome::new(cases)
    });
    ok &= criterion(7, "BDG bijection on pointed maps with <= 4 edges", || Outcome::new(bdg_cases(4)));
    ok &= criterion(8, "aggregation round trips and cardinalities", || {
        let mut cases = aggregation_cases(2, &cfg);
        cases.extend(aggregation_cases(3, &cfg));
        Outcome::new(cases)
    });
    ok &= criterion(9, "quasi-reduction identities and family cardinalities", || {
        let mut cases = Vec::new();
        for p in [2, 3, 4] {
            cases.extend(quasi_series_cases(p, &cfg));
        }
        for p in [2, 3] {
            cases.extend(family_cases(p, &cfg));
        }
        Outcome::new(cases)
    });
    ok &= criterion(10, "Catalan numbers from the one-boundary formula", || {
        Outcome::new(catalan_cases(6)).pin(&[
            "PASS catalan a=1: expected 1, got 1",
            "PASS catalan a=6: expected 132, got 132",
        ])
    });

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
