//! Eigenvalue recovery from sphere averages.
//!
//! A value on or above the separator `V(r)` belongs to exactly one real
//! power `α ≥ k/2`, found by bisection since the kernel mean is increasing in
//! `α` there. A nonzero value below `V(r)` bounds the oscillation parameter by
//! some `p`; on `r ≤ πρ/p` the eigenfunction is decreasing in `b ∈ [0, p]`, so
//! either the observation itself or one more value at `r₀ = πρ/p` pins `b`.

use core::f64::consts::{FRAC_2_PI, PI};

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::eigenfn::{self, lambda_from_alpha, lambda_from_b, separator_v, Branch};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{sphere_surface, HyperbolicSpace};
use crate::quadrature::QuadratureConfig;

const MAX_ALPHA: f64 = 1e6;
const MAX_BISECTIONS: usize = 200;

/// A measured sphere average `φ_λ(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub r: f64,
    pub value: f64,
}

impl Observation {
    pub fn new(r: f64, value: f64) -> Result<Self> {
        let r = ensure_finite("observation radius", r)?;
        if r <= 0.0 {
            return Err(Error::Domain { what: "observation radius", value: r });
        }
        let value = ensure_finite("observation value", value)?;
        Ok(Self { r, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// On or above the separator: `λ ≤ −κk²/4`, one radius suffices.
    LargeBranch,
    /// Below the separator and nonzero: `λ > −κk²/4`.
    SmallBranch,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryResult {
    pub lambda: f64,
    pub branch: Branch,
    pub radii_used: u8,
    /// The bound `p ≥ b` used on the oscillatory branch.
    pub b_bound: Option<f64>,
    /// Largest `|φ_λ(r) − value|` over the observations used.
    pub residual: f64,
    pub iterations: usize,
    pub second_radius: Option<f64>,
}

/// `max(10·abs_tol, 1e-10)`, applied relative to `max(1, |value|)`.
pub fn solver_tolerance(cfg: &QuadratureConfig) -> f64 {
    (10.0 * cfg.abs_tol).max(1e-10)
}

fn value_tolerance(cfg: &QuadratureConfig, value: f64) -> f64 {
    solver_tolerance(cfg) * value.abs().max(1.0)
}

pub fn classify(space: &HyperbolicSpace, obs: &Observation, cfg: &QuadratureConfig) -> Result<Classification> {
    if obs.value == 0.0 {
        return Ok(Classification::Zero);
    }
    let v = separator_v(space, obs.r, cfg)?;
    Ok(if obs.value >= v - value_tolerance(cfg, obs.value) { Classification::LargeBranch } else { Classification::SmallBranch })
}

struct Root {
    x: f64,
    iterations: usize,
}

/// Bisection for an increasing `g` with `g(lo) < 0 < g(hi)`.
fn bisect<G>(mut g: G, mut lo: f64, mut hi: f64) -> Result<Root>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let gm = g(mid)?;
        if gm.is_nan() {
            return Err(Error::NoConvergence { value: gm, reason: "objective is not a number inside the bracket" });
        }
        if gm == 0.0 {
            return Ok(Root { x: mid, iterations });
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        debug_assert!(lo < hi);
    }
    Ok(Root { x: 0.5 * (lo + hi), iterations })
}

fn check_residual(obs: &Observation, fitted: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let residual = (fitted - obs.value).abs();
    let tolerance = value_tolerance(cfg, obs.value);
    if residual <= tolerance {
        Ok(residual)
    } else {
        Err(Error::InconsistentObservation { r: obs.r, residual, tolerance })
    }
}

/// One-radius recovery for a value on or above `V(r)`.
pub fn recover_large(space: &HyperbolicSpace, obs: &Observation, cfg: &QuadratureConfig) -> Result<RecoveryResult> {
    let separator = separator_v(space, obs.r, cfg)?;
    let tol = value_tolerance(cfg, obs.value);
    if obs.value < separator - tol {
        return Err(Error::BelowSeparator { value: obs.value, separator });
    }
    if (obs.value - separator).abs() <= tol {
        return Ok(RecoveryResult {
            lambda: space.critical_lambda(),
            branch: Branch::Critical,
            radii_used: 1,
            b_bound: None,
            residual: (obs.value - separator).abs(),
            iterations: 0,
            second_radius: None,
        });
    }
    let phi_at = |alpha: f64| eigenfn::phi_real_alpha(space, alpha, obs.r, cfg);
    let mut lo = 0.5 * space.kf();
    let mut hi = space.kf();
    let mut iterations = 0;
    while phi_at(hi)? < obs.value {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if hi > MAX_ALPHA {
            return Err(Error::NoConvergence { value: obs.value, reason: "kernel power bracket exceeded 1e6" });
        }
    }
    let root = bisect(|alpha| Ok(phi_at(alpha)? - obs.value), lo, hi)?;
    let alpha = root.x;
    let residual = check_residual(obs, phi_at(alpha)?, cfg)?;
    Ok(RecoveryResult {
        lambda: lambda_from_alpha(space, alpha),
        branch: Branch::RealAlpha { alpha },
        radii_used: 1,
        b_bound: None,
        residual,
        iterations: iterations + root.iterations,
        second_radius: None,
    })
}

/// Upper bound `p` on the oscillation parameter of any eigenfunction that
/// takes the nonzero value `obs.value` at `obs.r`.
pub fn b_upper_bound(space: &HyperbolicSpace, obs: &Observation) -> Result<f64> {
    if obs.value == 0.0 {
        return Err(Error::ZeroObservation);
    }
    let rho = space.rho();
    let radius = space.eta_from_r(obs.r)?;
    let eta = radius.eta();
    let power = space.power_of_point(radius);
    let value = obs.value.abs();
    let p = match space.k() {
        1 => {
            let t1 = 9.0 * obs.r * power / (rho * eta * eta * PI * PI);
            FRAC_2_PI.max(t1 / (value * value))
        }
        2 => 1.0 / ((obs.r / rho).sinh() * value),
        k => {
            let kf = f64::from(k);
            let scaled_power = (power / (rho * rho)).powf(0.5 * kf);
            let t3 = (kf - 2.0) * PI * rho * scaled_power * sphere_surface(k - 1, 1.0) / (2.0 * eta * sphere_surface(k, 1.0));
            t3 / value
        }
    };
    Ok(p)
}

/// Largest radius on which the eigenfunction is monotone in `b ∈ [0, p]`.
pub fn admissible_radius(space: &HyperbolicSpace, p: f64) -> f64 {
    PI * space.rho() / p
}

/// One-radius recovery when `b ≤ p` is known and `obs.r ≤ πρ/p`.
pub fn recover_bounded(space: &HyperbolicSpace, obs: &Observation, p: f64, cfg: &QuadratureConfig) -> Result<RecoveryResult> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::Domain { what: "b bound p", value: p });
    }
    let max_radius = admissible_radius(space, p);
    if obs.r > max_radius * (1.0 + 1e-12) {
        return Err(Error::RadiusTooLarge { r: obs.r, max_radius });
    }
    let phi_at = |b: f64| eigenfn::phi_oscillatory(space, b, obs.r, cfg);
    let separator = phi_at(0.0)?;
    let floor = phi_at(p)?;
    let tol = value_tolerance(cfg, obs.value);
    let mut result = RecoveryResult {
        lambda: space.critical_lambda(),
        branch: Branch::Critical,
        radii_used: 1,
        b_bound: Some(p),
        residual: (obs.value - separator).abs(),
        iterations: 0,
        second_radius: None,
    };
    if obs.value > separator + tol || obs.value < floor - tol {
        return Err(Error::ValueOutOfRange { value: obs.value, lo: floor, hi: separator });
    }
    if result.residual <= tol {
        return Ok(result);
    }
    let b = if obs.value <= floor {
        p
    } else {
        let root = bisect(|b| Ok(obs.value - phi_at(b)?), 0.0, p)?;
        result.iterations = root.iterations;
        root.x
    };
    result.residual = check_residual(obs, phi_at(b)?, cfg)?;
    result.lambda = lambda_from_b(space, b);
    result.branch = Branch::Oscillatory { b };
    Ok(result)
}

fn small_branch_bound(space: &HyperbolicSpace, obs: &Observation, cfg: &QuadratureConfig) -> Result<f64> {
    match classify(space, obs, cfg)? {
        Classification::Zero => Err(Error::ZeroObservation),
        Classification::LargeBranch => Err(Error::AboveSeparator { value: obs.value, separator: separator_v(space, obs.r, cfg)? }),
        Classification::SmallBranch => b_upper_bound(space, obs),
    }
}

fn finish_with_second(
    space: &HyperbolicSpace,
    first: &Observation,
    second: &Observation,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<RecoveryResult> {
    let mut result = recover_bounded(space, second, p, cfg)?;
    let param = eigenfn::SpectralParam { lambda: result.lambda, branch: result.branch };
    // λ is fixed by the second value alone. The misfit at the first radius
    // is reported rather than enforced: measured values are usually rounded.
    let at_first = eigenfn::phi_spectral(space, &param, first.r, cfg)?;
    result.residual = result.residual.max((at_first - first.value).abs());
    result.radii_used = 2;
    result.second_radius = Some(second.r);
    Ok(result)
}

/// Recovery below the separator, asking `sampler` for `φ(r₀)` at
/// `r₀ = πρ/p` when the first radius is too large to decide alone.
pub fn recover_two_radii<S>(space: &HyperbolicSpace, first: &Observation, sampler: S, cfg: &QuadratureConfig) -> Result<RecoveryResult>
where
    S: FnOnce(f64) -> Result<f64>,
{
    let p = small_branch_bound(space, first, cfg)?;
    let r0 = admissible_radius(space, p);
    if first.r <= r0 {
        return recover_bounded(space, first, p, cfg);
    }
    let second = Observation::new(r0, sampler(r0)?)?;
    finish_with_second(space, first, &second, p, cfg)
}

/// Recovery with a caller-chosen second observation at some `r ≤ πρ/p`.
/// The second value is ignored when the first decides on its own.
pub fn recover_with_pair(
    space: &HyperbolicSpace,
    first: &Observation,
    second: &Observation,
    cfg: &QuadratureConfig,
) -> Result<RecoveryResult> {
    if classify(space, first, cfg)? == Classification::LargeBranch {
        return recover_large(space, first, cfg);
    }
    let p = small_branch_bound(space, first, cfg)?;
    if first.r <= admissible_radius(space, p) {
        return recover_bounded(space, first, p, cfg);
    }
    finish_with_second(space, first, second, p, cfg)
}

/// Full pipeline with a sampler for the optional second radius.
pub fn recover_with_sampler<S>(space: &HyperbolicSpace, obs: &Observation, sampler: S, cfg: &QuadratureConfig) -> Result<RecoveryResult>
where
    S: FnOnce(f64) -> Result<f64>,
{
    match classify(space, obs, cfg)? {
        Classification::Zero => Err(Error::ZeroObservation),
        Classification::LargeBranch => recover_large(space, obs, cfg),
        Classification::SmallBranch => recover_two_radii(space, obs, sampler, cfg),
    }
}

/// Full pipeline from a single observation; fails with
/// [`Error::RadiusTooLarge`] naming `r₀` when a second value is needed.
pub fn recover(space: &HyperbolicSpace, obs: &Observation, cfg: &QuadratureConfig) -> Result<RecoveryResult> {
    recover_with_sampler(space, obs, |r0| Err(Error::RadiusTooLarge { r: obs.r, max_radius: r0 }), cfg)
}
