//! Property checks on sampled grids. Each returns one [`Check`] with the
//! worst observed deviation against a fixed limit.

use std::f64::consts::PI;
use std::fmt;

use hypradial_core::eigenfn::{
    self, closed_form_k2, phi, phi_oscillatory, phi_real_alpha, separator_v, spectral_from_lambda, taylor_moment,
};
use hypradial_core::inversion::{self, Observation};
use hypradial_core::oracle::{self, solve_ode, Limit};
use hypradial_core::radialize::pole;
use hypradial_core::{Branch, HyperbolicSpace, QuadratureConfig, Result, StepControl};

use crate::parallel;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub limit: f64,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, worst: f64, limit: f64, detail: String) -> Self {
        Self { name, passed: worst <= limit, worst, limit, detail }
    }

    /// A check that could not run to completion.
    pub fn errored(name: &'static str, err: &hypradial_core::Error) -> Self {
        Self { name, passed: false, worst: f64::NAN, limit: f64::NAN, detail: format!("error: {err}") }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: worst {:.3e}, limit {:.1e}", self.name, self.worst, self.limit)?;
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        Ok(())
    }
}

fn unit(k: u32) -> HyperbolicSpace {
    HyperbolicSpace::new(1.0, k).expect("unit-radius space is valid")
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// `n` evenly spaced points covering `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Deviation measure for quantities that may grow far beyond 1.
fn scaled(diff: f64, reference: f64) -> f64 {
    diff.abs() / reference.abs().max(1.0)
}

/// The seven eigenvalues, in units of `ρ = 1`, that span both branches.
pub fn probe_lambdas(space: &HyperbolicSpace) -> [f64; 7] {
    let c = space.critical_lambda();
    [-5.0, -1.0, 0.0, 0.5 * c, c, 2.0 * c, 10.0]
}

pub fn closed_form_agreement() -> Result<Check> {
    let s = unit(2);
    let mut worst: f64 = 0.0;
    for b in [0.5, 1.0, 3.0] {
        for r in linspace(0.1, 10.0, 200) {
            worst = worst.max((phi_oscillatory(&s, b, r, &cfg())? - closed_form_k2(&s, b, r)?).abs());
        }
    }
    Ok(Check::within("closed form k=2", worst, 1e-9, "b in {0.5, 1, 3}, 200 radii in [0.1, 10]".into()))
}

pub fn oracle_equivalence() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for k in 1..=3 {
        let s = unit(k);
        for lambda in probe_lambdas(&s) {
            let table = solve_ode(&s, lambda, 10.0, &StepControl::default())?;
            for r in linspace(0.05, 10.0, 100) {
                let reference = table.value_at(r)?;
                let dev = scaled(phi(&s, lambda, r, &cfg())? - reference, reference);
                if dev > worst {
                    worst = dev;
                    at = format!("at k={k} lambda={lambda} r={r:.3}");
                }
            }
        }
    }
    Ok(Check::within("quadrature vs ODE", worst, 1e-8, format!("relative to max(1, |phi|), {at}")))
}

pub fn two_root_identity() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for k in [1, 2, 3, 5] {
        let s = unit(k);
        let kf = f64::from(k);
        let steps = ((0.5 * kf + 2.0) / 0.25).round() as usize;
        for i in 0..=steps {
            let alpha = -2.0 + 0.25 * i as f64;
            for r in [0.5, 1.0, 3.0] {
                let a = phi_real_alpha(&s, alpha, r, &cfg())?;
                let b = phi_real_alpha(&s, kf - alpha, r, &cfg())?;
                worst = worst.max(scaled(a - b, a));
            }
        }
    }
    Ok(Check::within("two-root identity", worst, 1e-10, "alpha in [-2, k/2], k in {1, 2, 3, 5}".into()))
}

pub fn ordering_chain() -> Result<Check> {
    let mut violations = 0usize;
    let mut cases = 0usize;
    let mut margin = f64::INFINITY;
    for k in 1..=3 {
        let s = unit(k);
        let kf = f64::from(k);
        for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = separator_v(&s, r, &cfg())?;
            for alpha in linspace(-2.0, kf + 2.0, 17) {
                cases += 1;
                let above = phi_real_alpha(&s, alpha, r, &cfg())?;
                violations += usize::from(above < v);
            }
            for b in [0.1, 0.5, 1.0, 2.0, 5.0] {
                cases += 1;
                let below = phi_oscillatory(&s, b, r, &cfg())?;
                margin = margin.min(v - below);
                violations += usize::from(below >= v);
            }
        }
    }
    let detail = format!("{violations} violations in {cases} cases, smallest V - phi_osc {margin:.3e}");
    Ok(Check::within("ordering phi_real >= V > phi_osc", violations as f64, 0.0, detail))
}

/// The round-trip eigenvalue grid, as multiples of the critical value.
pub const ROUND_TRIP_FACTORS: [f64; 8] = [-5.0, -1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 5.0];
pub const ROUND_TRIP_RADII: [f64; 3] = [0.5, 1.0, 2.0];

pub fn round_trip() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut two = 0usize;
    for k in 1..=3 {
        let s = unit(k);
        for f in ROUND_TRIP_FACTORS {
            let lambda = f * s.critical_lambda();
            for r in ROUND_TRIP_RADII {
                let case = format!("k={k} lambda={lambda} r={r}");
                let obs = Observation::new(r, phi(&s, lambda, r, &cfg())?)?;
                let res = match inversion::recover_with_sampler(&s, &obs, |r0| phi(&s, lambda, r0, &cfg()), &cfg()) {
                    Ok(res) => res,
                    Err(err) => {
                        failures.push(format!("{case}: {err}"));
                        continue;
                    }
                };
                let err = scaled(res.lambda - lambda, lambda);
                worst = worst.max(err);
                let decides_alone = obs.value >= separator_v(&s, r, &cfg())? || {
                    let p = inversion::b_upper_bound(&s, &obs)?;
                    r <= inversion::admissible_radius(&s, p)
                };
                let expected = if decides_alone { 1 } else { 2 };
                two += usize::from(res.radii_used == 2);
                if res.radii_used != expected {
                    failures.push(format!("{case}: radii_used {} expected {expected}", res.radii_used));
                }
            }
        }
    }
    let mut check = Check::within("round-trip recovery", worst, 1e-6, format!("relative to max(1, |lambda|), {two} cases used two radii"));
    if !failures.is_empty() {
        check.passed = false;
        check.detail = format!("{} failures, first: {}", failures.len(), failures[0]);
    }
    Ok(check)
}

pub fn bound_validity() -> Result<Check> {
    // Ratio b / p over every oscillatory round-trip observation; valid iff ≤ 1.
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let s = unit(k);
        for f in ROUND_TRIP_FACTORS {
            let param = spectral_from_lambda(&s, f * s.critical_lambda())?;
            let Branch::Oscillatory { b } = param.branch else { continue };
            for r in ROUND_TRIP_RADII {
                let obs = Observation::new(r, eigenfn::phi_spectral(&s, &param, r, &cfg())?)?;
                worst = worst.max(b / inversion::b_upper_bound(&s, &obs)?);
            }
        }
    }
    let s = unit(2);
    let p = inversion::b_upper_bound(&s, &Observation::new(1.0, phi_oscillatory(&s, 1.0, 1.0, &cfg())?)?)?;
    let p_err = (p - 1.188_39).abs();
    let mut check = Check::within("b bound validity", worst, 1.0, format!("max b/p, and p(k=2, r=1, b=1) = {p:.6}"));
    check.passed &= p_err <= 1e-4;
    Ok(check)
}

pub fn zero_structure() -> Result<Check> {
    let mut problems = Vec::new();
    for k in 1..=3 {
        let s = unit(k);
        let c = s.critical_lambda();
        for lambda in [-5.0, -1.0, 0.0, 0.5 * c, c] {
            let n = oracle::count_zeros(&s, lambda, 50.0)?;
            if n != 0 {
                problems.push(format!("k={k} lambda={lambda}: {n} zeros up to 50"));
            }
        }
        for lambda in [1.5 * c, 2.0 * c, 5.0 * c] {
            let mut counts = [0usize; 3];
            for (n, r_max) in counts.iter_mut().zip([25.0, 50.0, 100.0]) {
                *n = oracle::count_zeros(&s, lambda, r_max)?;
            }
            if !(counts[0] >= 1 && counts[0] < counts[1] && counts[1] < counts[2]) {
                problems.push(format!("k={k} lambda={lambda}: counts {counts:?} at r_max 25, 50, 100"));
            }
        }
    }
    let s = unit(2);
    let zeros = oracle::find_zeros(&s, 2.0, 10.0)?;
    let mut worst = f64::INFINITY;
    if zeros.len() == 3 {
        worst = zeros.iter().enumerate().map(|(j, z)| (z - PI * (j + 1) as f64).abs()).fold(0.0, f64::max);
    } else {
        problems.push(format!("{} zeros for lambda=2 up to 10", zeros.len()));
    }
    let mut check = Check::within(
        "zero structure",
        worst,
        1e-6,
        format!("count_zeros(lambda=2, k=2, rho=1, r_max=10) = {}, worst is the distance to j*pi", zeros.len()),
    );
    if !problems.is_empty() {
        check.passed = false;
        check.detail = problems.join("; ");
    }
    Ok(check)
}

pub fn limits() -> Result<Check> {
    let s = unit(2);
    let at = |lambda: f64| -> Result<f64> { solve_ode(&s, lambda, 30.0, &StepControl::default())?.value_at(30.0) };
    let (flat, grow, decay) = (at(0.0)?, at(-3.0)?, at(2.0)?);
    let classified = oracle::limit_at_infinity(0.0) == Limit::One
        && oracle::limit_at_infinity(-3.0) == Limit::Infinity
        && oracle::limit_at_infinity(2.0) == Limit::Zero;
    let mut check = Check::within(
        "limits at r=30",
        (flat - 1.0).abs(),
        1e-6,
        format!("phi(lambda=-3) = {grow:.4e} (> 1e3), |phi(lambda=2)| = {:.3e} (< 1e-3)", decay.abs()),
    );
    check.passed &= grow > 1e3 && decay.abs() < 1e-3 && classified;
    Ok(check)
}

pub fn separator_decay() -> Result<Check> {
    let s = unit(2);
    let ratio = separator_v(&s, 10.0, &cfg())? / separator_v(&s, 1.0, &cfg())?;
    let grid = linspace(0.1, 10.0, 100);
    let values: Vec<f64> = grid.iter().map(|&r| separator_v(&s, r, &cfg())).collect::<Result<_>>()?;
    let rises = values.windows(2).filter(|w| w[1] >= w[0]).count();
    let exact = 10.0 * 1.0f64.sinh() / 10.0f64.sinh();
    let detail = format!("{rises} non-decreasing steps on 100 radii, closed form 10 sinh(1)/sinh(10) = {exact:.6e}");
    let mut check = Check::within("separator decay V(10)/V(1)", ratio, 1e-3, detail);
    check.passed &= rises == 0;
    Ok(check)
}

/// `(k, α, r)` sampled by the Monte Carlo check.
pub const MC_CONFIGS: [(u32, f64, f64); 6] = [(2, 1.0, 1.0), (2, 3.0, 1.0), (1, 0.7, 0.5), (3, 2.5, 1.5), (3, -1.0, 1.0), (5, 4.0, 0.8)];

pub fn radialization(samples: u64, seed: u64, threads: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (i, &(k, alpha, r)) in MC_CONFIGS.iter().enumerate() {
        let s = unit(k);
        let avg = parallel::sphere_average(&s, alpha, r, samples, seed.wrapping_add(i as u64), &pole(&s), threads)?;
        let exact = phi_real_alpha(&s, alpha, r, &cfg())?;
        let z = if avg.stderr > 0.0 { (avg.mean - exact).abs() / avg.stderr } else { f64::INFINITY };
        worst = worst.max(z);
    }
    Ok(Check::within("sphere average vs phi", worst, 4.0, format!("in standard errors, {samples} samples per case, seed {seed}")))
}

pub fn taylor_series() -> Result<Check> {
    let (b, r): (f64, f64) = (0.5, 1.0);
    let mut worst: f64 = 0.0;
    for k in [1, 2] {
        let s = unit(k);
        let mut sum = 0.0;
        let mut factorial = 1.0;
        for m in 0..=8u32 {
            if m > 0 {
                factorial *= f64::from(2 * m - 1) * f64::from(2 * m);
            }
            sum += (-b * b).powi(m as i32) * taylor_moment(&s, m, r, &cfg())? / factorial;
        }
        worst = worst.max((sum - phi_oscillatory(&s, b, r, &cfg())?).abs());
    }
    Ok(Check::within("Taylor series in b", worst, 1e-8, "terms m <= 8, b = 0.5, r = 1, k in {1, 2}".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Identity,
    Oracle,
    Zeros,
    Limits,
    Separator,
    Mc,
    Inversion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

/// Runs a suite; a check that errors is reported as a failure.
pub fn run_suite(suite: Suite, mc: McSettings) -> Vec<Check> {
    type Job<'a> = (&'static str, Box<dyn Fn() -> Result<Check> + 'a>);
    let identity: Vec<Job> = vec![
        ("two-root identity", Box::new(two_root_identity)),
        ("ordering phi_real >= V > phi_osc", Box::new(ordering_chain)),
        ("closed form k=2", Box::new(closed_form_agreement)),
        ("Taylor series in b", Box::new(taylor_series)),
    ];
    let oracle: Vec<Job> = vec![("quadrature vs ODE", Box::new(oracle_equivalence))];
    let zeros: Vec<Job> = vec![("zero structure", Box::new(zero_structure))];
    let limits: Vec<Job> = vec![("limits at r=30", Box::new(limits))];
    let separator: Vec<Job> = vec![("separator decay V(10)/V(1)", Box::new(separator_decay))];
    let mc_jobs: Vec<Job> = vec![("sphere average vs phi", Box::new(move || radialization(mc.samples, mc.seed, mc.threads)))];
    let inversion: Vec<Job> = vec![("round-trip recovery", Box::new(round_trip)), ("b bound validity", Box::new(bound_validity))];
    let jobs: Vec<Job> = match suite {
        Suite::All => [identity, oracle, zeros, limits, separator, inversion, mc_jobs].into_iter().flatten().collect(),
        Suite::Identity => identity,
        Suite::Oracle => oracle,
        Suite::Zeros => zeros,
        Suite::Limits => limits,
        Suite::Separator => separator,
        Suite::Mc => mc_jobs,
        Suite::Inversion => inversion,
    };
    jobs.into_iter().map(|(name, job)| job().unwrap_or_else(|err| Check::errored(name, &err))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 5.0, 6), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(linspace(1.0, 1.0, 1), vec![1.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn display_line() {
        let c = Check::within("demo", 1e-12, 1e-9, String::new());
        assert_eq!(c.to_string(), "PASS demo: worst 1.000e-12, limit 1.0e-9");
        let c = Check::within("demo", 2.0, 1.0, "x".into());
        assert!(c.to_string().starts_with("FAIL demo"));
    }
}
