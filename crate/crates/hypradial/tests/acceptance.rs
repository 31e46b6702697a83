//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails on any red line except criterion 9, whose threshold lies
//! below the exact value of `V(10)/V(1)`; for that one the implementation is
//! instead held to the closed form.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypradial::checks::{self, Check};
use hypradial::parallel;
use hypradial_core::Result;

const MC_SAMPLES: u64 = 1_000_000;
const MC_SEED: u64 = 20_261_014;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Option<Duration>,
    run: Box<dyn Fn() -> Result<Check>>,
}

fn criterion(id: u8, title: &'static str, budget_s: Option<u64>, run: impl Fn() -> Result<Check> + 'static) -> Criterion {
    Criterion { id, title, budget: budget_s.map(Duration::from_secs), run: Box::new(run) }
}

/// `V(10)/V(1) = 10 sinh(1)/sinh(10) ≈ 1.0671e-3` for `k = 2`, `ρ = 1`.
fn separator_ratio_matches_closed_form(check: &Check) -> bool {
    let exact = 10.0 * 1.0f64.sinh() / 10.0f64.sinh();
    (check.worst - exact).abs() <= 1e-9 * exact && check.detail.starts_with("0 non-decreasing")
}

fn main() -> ExitCode {
    let threads = parallel::default_threads();
    let criteria = vec![
        criterion(1, "closed-form agreement (k=2)", Some(5), checks::closed_form_agreement),
        criterion(2, "oracle equivalence", Some(30), checks::oracle_equivalence),
        criterion(3, "two-root identity", Some(5), checks::two_root_identity),
        criterion(4, "ordering chain", None, checks::ordering_chain),
        criterion(5, "round-trip recovery", Some(60), checks::round_trip),
        criterion(6, "bound validity", None, checks::bound_validity),
        criterion(7, "zero structure", None, checks::zero_structure),
        criterion(8, "limits", None, checks::limits),
        criterion(9, "separator decay", None, checks::separator_decay),
        criterion(10, "Monte Carlo radialization", Some(60), move || checks::radialization(MC_SAMPLES, MC_SEED, threads)),
        criterion(11, "Taylor-series consistency", None, checks::taylor_series),
    ];

    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut check = (c.run)().unwrap_or_else(|err| Check::errored(c.title, &err));
        let elapsed = start.elapsed();
        let mut timing = format!("{:.2}s", elapsed.as_secs_f64());
        if let Some(budget) = c.budget {
            timing.push_str(&format!(" of {}s", budget.as_secs()));
            check.passed &= elapsed <= budget;
        }
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!("{verdict} [{:>2}] {}: worst {:.3e}, limit {:.1e}, {timing}; {}", c.id, c.title, check.worst, check.limit, check.detail);
        let tolerated = c.id == 9 && separator_ratio_matches_closed_form(&check);
        if !check.passed && !tolerated {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{unexpected} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
