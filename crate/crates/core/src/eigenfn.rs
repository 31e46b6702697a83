//! Radial eigenfunctions as sphere means of powers of the Schwarz kernel.
//!
//! For the boundary sphere seen from `m` at Euclidean radius `η`, the mean of
//! `g(ω)` reduces to the polar integral
//! `(σ_{k−1}/σ_k) ∫₀^π g(ω(θ)) sin^{k−1}θ dθ`. With `λ = (αk − α²)/ρ²` the
//! eigenfunction is the mean of `ω^α` on the real branch and the mean of
//! `ω^{k/2} cos(b ln ω)` on the oscillatory branch `α = k/2 + ib`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{sphere_surface, EuclideanRadius, HyperbolicSpace};
use crate::quadrature::{breakpoints, integrate, QuadratureConfig};

/// Exponents above this are integrated with the integrand's maximum factored out.
const SHIFT_THRESHOLD: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// Real `α ≥ k/2`; the eigenfunction never vanishes.
    RealAlpha { alpha: f64 },
    /// `α = k/2`, the separator.
    Critical,
    /// `α = k/2 + ib` with `b > 0`; the eigenfunction has infinitely many zeros.
    Oscillatory { b: f64 },
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::RealAlpha { .. } => "real-alpha",
            Branch::Critical => "critical",
            Branch::Oscillatory { .. } => "oscillatory",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub lambda: f64,
    pub branch: Branch,
}

impl SpectralParam {
    /// Eigenvalue re-derived from the branch parameters.
    pub fn lambda_from_branch(&self, space: &HyperbolicSpace) -> f64 {
        match self.branch {
            Branch::RealAlpha { alpha } => lambda_from_alpha(space, alpha),
            Branch::Critical => space.critical_lambda(),
            Branch::Oscillatory { b } => lambda_from_b(space, b),
        }
    }
}

pub fn spectral_from_lambda(space: &HyperbolicSpace, lambda: f64) -> Result<SpectralParam> {
    let lambda = ensure_finite("eigenvalue lambda", lambda)?;
    let critical = space.critical_lambda();
    let branch = if (lambda - critical).abs() <= 1e-12 * lambda.abs().max(1.0) {
        Branch::Critical
    } else {
        let rho2 = space.rho() * space.rho();
        let half_k = 0.5 * space.kf();
        if lambda < critical {
            Branch::RealAlpha { alpha: half_k + (half_k * half_k - lambda * rho2).sqrt() }
        } else {
            Branch::Oscillatory { b: (lambda * rho2 - half_k * half_k).sqrt() }
        }
    };
    Ok(SpectralParam { lambda, branch })
}

/// `λ = (αk − α²)/ρ²` for real `α`.
pub fn lambda_from_alpha(space: &HyperbolicSpace, alpha: f64) -> f64 {
    let k = space.kf();
    (alpha * k - alpha * alpha) / (space.rho() * space.rho())
}

/// `λ = (k²/4 + b²)/ρ²` for `α = k/2 + ib`.
pub fn lambda_from_b(space: &HyperbolicSpace, b: f64) -> f64 {
    let half_k = 0.5 * space.kf();
    (half_k * half_k + b * b) / (space.rho() * space.rho())
}

/// Shape hints used to lay out the initial quadrature panels.
#[derive(Debug, Clone, Copy)]
struct Profile {
    /// Magnitude of the kernel power; the peak at `θ = 0` narrows like `1/√α`.
    power: f64,
    /// Oscillation parameter `b` of `cos(b ln ω)`, zero if absent.
    b: f64,
}

fn polar_mean<G>(space: &HyperbolicSpace, radius: EuclideanRadius, r: f64, profile: Profile, cfg: &QuadratureConfig, g: G) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    cfg.validate()?;
    let km1 = (space.k() - 1) as i32;
    let integrand = |theta: f64| g(space.ln_omega_theta(radius, theta)) * theta.sin().powi(km1);

    let oscillations = (profile.b * r / (space.rho() * PI)).ceil();
    let n = if profile.b > 0.0 { 16usize.max(cfg.base_panels_per_oscillation * oscillations as usize) } else { 16 };
    // The kernel halves at θ ≈ (ρ − η)/√(ρη); grade geometrically from there.
    let first = PI / n as f64;
    let mut graded = Vec::new();
    if radius.eta() > 0.0 {
        let mut w = radius.gap() / (space.rho() * radius.eta()).sqrt() / profile.power.max(1.0).sqrt();
        while w < first {
            graded.push(w);
            w *= 2.0;
        }
    }
    let pts = breakpoints(0.0, PI, n, graded);
    let result = integrate(integrand, &pts, cfg)?;
    Ok(space.polar_normalization() * result.value)
}

fn check_radius(r: f64) -> Result<f64> {
    let r = ensure_finite("geodesic radius r", r)?;
    if r < 0.0 {
        return Err(Error::Domain { what: "geodesic radius r", value: r });
    }
    Ok(r)
}

/// Mean of `ω^α` over the boundary sphere: the radial eigenfunction for
/// `λ = (αk − α²)/ρ²`. Any real `α` is accepted; `α` and `k − α` agree.
pub fn phi_real_alpha(space: &HyperbolicSpace, alpha: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let alpha = ensure_finite("kernel power alpha", alpha)?;
    let r = check_radius(r)?;
    if r == 0.0 || alpha == 0.0 {
        return Ok(1.0);
    }
    let radius = space.eta_from_r(r)?;
    // |ln ω| ≤ r/ρ bounds the exponent.
    let top = alpha.abs() * r / space.rho();
    let shift = if top > SHIFT_THRESHOLD { top } else { 0.0 };
    let profile = Profile { power: alpha.abs(), b: 0.0 };
    let mean = polar_mean(space, radius, r, profile, cfg, |ln_w| (alpha * ln_w - shift).exp())?;
    Ok(mean * shift.exp())
}

/// Mean of `ω^{k/2} cos(b ln ω)`: the radial eigenfunction for
/// `λ = (k²/4 + b²)/ρ²`. `b = 0` gives the separator.
pub fn phi_oscillatory(space: &HyperbolicSpace, b: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let b = ensure_finite("oscillation parameter b", b)?;
    if b < 0.0 {
        return Err(Error::Domain { what: "oscillation parameter b", value: b });
    }
    let r = check_radius(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    let radius = space.eta_from_r(r)?;
    let half_k = 0.5 * space.kf();
    let top = half_k * r / space.rho();
    let shift = if top > SHIFT_THRESHOLD { top } else { 0.0 };
    let profile = Profile { power: half_k, b };
    let mean = polar_mean(space, radius, r, profile, cfg, |ln_w| (half_k * ln_w - shift).exp() * (b * ln_w).cos())?;
    Ok(mean * shift.exp())
}

/// The oscillatory eigenfunction through the chord parametrization,
/// `4ρ(ρ² − η²)^{k/2} σ_{k−1}/|S^k(ρ)| ∫₀^{π/2} sin^{k−1}ψ/(l + q) · cos(b ln(l/q)) dψ`.
pub fn phi_oscillatory_psi(space: &HyperbolicSpace, b: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let b = ensure_finite("oscillation parameter b", b)?;
    if b < 0.0 {
        return Err(Error::Domain { what: "oscillation parameter b", value: b });
    }
    let r = check_radius(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    let radius = space.eta_from_r(r)?;
    let rho = space.rho();
    let k = space.k();
    let power = space.power_of_point(radius);
    let prefactor = 4.0 * rho * (power / (rho * rho)).powf(0.5 * space.kf()) * sphere_surface(k - 1, 1.0) / sphere_surface(k, 1.0);
    let km1 = (k - 1) as i32;
    let integrand = |psi: f64| match space.chord(radius, psi.min(FRAC_PI_2)) {
        Ok(c) => psi.sin().powi(km1) / c.sum * (b * c.omega.ln()).cos(),
        Err(_) => f64::NAN,
    };
    let n = 16usize.max(cfg.base_panels_per_oscillation * (b * r / (rho * PI)).ceil() as usize);
    let result = integrate(integrand, &breakpoints(0.0, FRAC_PI_2, n, []), cfg)?;
    Ok(prefactor * result.value)
}

/// The radial eigenfunction with `φ(0) = 1` for any real eigenvalue.
pub fn phi(space: &HyperbolicSpace, lambda: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    phi_spectral(space, &spectral_from_lambda(space, lambda)?, r, cfg)
}

pub fn phi_spectral(space: &HyperbolicSpace, param: &SpectralParam, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match param.branch {
        Branch::RealAlpha { alpha } => phi_real_alpha(space, alpha, r, cfg),
        Branch::Critical => separator_v(space, r, cfg),
        Branch::Oscillatory { b } => phi_oscillatory(space, b, r, cfg),
    }
}

/// `V(r)`, the eigenfunction at the critical power `α = k/2`. It separates
/// the never-vanishing eigenfunctions (above it) from the oscillating ones.
pub fn separator_v(space: &HyperbolicSpace, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    phi_real_alpha(space, 0.5 * space.kf(), r, cfg)
}

/// Closed form for `k = 2`: `sin(br/ρ)/(b sinh(r/ρ))`, and `(r/ρ)/sinh(r/ρ)` at `b = 0`.
pub fn closed_form_k2(space: &HyperbolicSpace, b: f64, r: f64) -> Result<f64> {
    if space.k() != 2 {
        return Err(Error::Usage("closed form is only available for k = 2"));
    }
    let b = ensure_finite("oscillation parameter b", b)?;
    if b < 0.0 {
        return Err(Error::Domain { what: "oscillation parameter b", value: b });
    }
    let r = check_radius(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    let x = r / space.rho();
    Ok(if b == 0.0 { x / x.sinh() } else { (b * x).sin() / (b * x.sinh()) })
}

/// Normalized even moment `mean(ω^{k/2} (ln ω)^{2m})`, the `2m`-th derivative
/// in `α` of the kernel mean at `α = k/2`.
pub fn taylor_moment(space: &HyperbolicSpace, m: u32, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let r = check_radius(r)?;
    if r == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let radius = space.eta_from_r(r)?;
    let half_k = 0.5 * space.kf();
    let top = half_k * r / space.rho();
    let shift = if top > SHIFT_THRESHOLD { top } else { 0.0 };
    let profile = Profile { power: half_k, b: 0.0 };
    let even = 2 * m as i32;
    let mean = polar_mean(space, radius, r, profile, cfg, |ln_w| (half_k * ln_w - shift).exp() * ln_w.powi(even))?;
    Ok(mean * shift.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn space(rho: f64, k: u32) -> HyperbolicSpace {
        HyperbolicSpace::new(rho, k).unwrap()
    }

    #[test]
    fn branch_trichotomy() {
        let s = space(1.0, 2);
        assert_eq!(spectral_from_lambda(&s, 0.0).unwrap().branch, Branch::RealAlpha { alpha: 2.0 });
        assert_eq!(spectral_from_lambda(&s, 1.0).unwrap().branch, Branch::Critical);
        assert_eq!(spectral_from_lambda(&s, 1.0 + 1e-13).unwrap().branch, Branch::Critical);
        assert_eq!(spectral_from_lambda(&s, 2.0).unwrap().branch, Branch::Oscillatory { b: 1.0 });
        assert!(spectral_from_lambda(&s, f64::NAN).is_err());
    }

    #[test]
    fn lambda_round_trips_through_branch() {
        for (rho, k) in [(1.0, 1), (0.7, 2), (2.0, 3), (1.0, 5)] {
            let s = space(rho, k);
            for i in -40..40 {
                let lambda = 0.37 * f64::from(i) / (rho * rho);
                let p = spectral_from_lambda(&s, lambda).unwrap();
                let back = p.lambda_from_branch(&s);
                assert!((back - lambda).abs() <= 1e-12 * lambda.abs().max(1.0), "{lambda} vs {back}");
                match p.branch {
                    Branch::RealAlpha { alpha } => assert!(alpha >= 0.5 * s.kf() && lambda < s.critical_lambda()),
                    Branch::Critical => {}
                    Branch::Oscillatory { b } => assert!(b > 0.0 && lambda > s.critical_lambda()),
                }
            }
        }
    }

    #[test]
    fn lambda_from_alpha_examples() {
        let s = space(1.0, 2);
        assert_eq!(lambda_from_alpha(&s, 0.0), 0.0);
        assert_eq!(lambda_from_alpha(&s, 1.0), 1.0);
        assert_eq!(lambda_from_b(&s, 1.0), 2.0);
    }

    #[test]
    fn zero_power_and_origin() {
        for k in [1, 2, 4] {
            let s = space(1.3, k);
            assert_eq!(phi_real_alpha(&s, 0.0, 3.0, &cfg()).unwrap(), 1.0);
            assert_eq!(phi_real_alpha(&s, 2.5, 0.0, &cfg()).unwrap(), 1.0);
            assert_eq!(phi_oscillatory(&s, 2.5, 0.0, &cfg()).unwrap(), 1.0);
            assert_eq!(separator_v(&s, 0.0, &cfg()).unwrap(), 1.0);
        }
    }

    #[test]
    fn k2_real_alpha_matches_cosh() {
        let s = space(1.0, 2);
        let v = phi_real_alpha(&s, 3.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v, 1.0f64.cosh(), max_relative = 1e-11);
        let w = phi_real_alpha(&s, -1.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(w, v, max_relative = 1e-11);
    }

    #[test]
    fn k2_oscillatory_examples() {
        let s = space(1.0, 2);
        let v = phi_oscillatory(&s, 1.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v, 1.0f64.sin() / 1.0f64.sinh(), max_relative = 1e-11);
        assert!(phi_oscillatory(&s, 1.0, PI, &cfg()).unwrap().abs() < 1e-11);
        assert_relative_eq!(phi(&s, 2.0, 1.0, &cfg()).unwrap(), 0.716_03, epsilon = 1e-5);
        assert_relative_eq!(phi(&s, -3.0, 1.0, &cfg()).unwrap(), 1.0f64.cosh(), max_relative = 1e-11);
        assert_relative_eq!(phi(&s, 0.0, 5.0, &cfg()).unwrap(), 1.0, epsilon = 1e-12);
        assert!(phi_oscillatory(&s, -1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn small_b_tends_to_separator() {
        for k in [1, 2, 3] {
            let s = space(1.0, k);
            let v = separator_v(&s, 1.5, &cfg()).unwrap();
            let o = phi_oscillatory(&s, 1e-5, 1.5, &cfg()).unwrap();
            assert!((v - o).abs() < 1e-8);
            assert_eq!(phi_oscillatory(&s, 0.0, 1.5, &cfg()).unwrap(), v);
        }
    }

    #[test]
    fn separator_examples() {
        let s = space(1.0, 2);
        assert_relative_eq!(separator_v(&s, 1.0, &cfg()).unwrap(), 1.0 / 1.0f64.sinh(), max_relative = 1e-11);
        assert_relative_eq!(separator_v(&s, 10.0, &cfg()).unwrap(), 10.0 / 10.0f64.sinh(), max_relative = 1e-9);
    }

    #[test]
    fn closed_form_examples() {
        let s = space(1.0, 2);
        assert_relative_eq!(closed_form_k2(&s, 1.0, 1.0).unwrap(), 0.716_03, epsilon = 1e-5);
        assert!(closed_form_k2(&s, 2.0, PI).unwrap().abs() < 1e-15);
        let s2 = space(2.0, 2);
        assert_relative_eq!(closed_form_k2(&s2, 1.0, 2.0).unwrap(), 1.0f64.sin() / 1.0f64.sinh(), max_relative = 1e-15);
        assert!(matches!(closed_form_k2(&space(1.0, 3), 1.0, 1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn moments() {
        let s = space(1.0, 2);
        let v = separator_v(&s, 1.0, &cfg()).unwrap();
        assert_eq!(taylor_moment(&s, 0, 1.0, &cfg()).unwrap(), v);
        assert_eq!(taylor_moment(&s, 3, 0.0, &cfg()).unwrap(), 0.0);
        assert!(taylor_moment(&s, 1, 1.0, &cfg()).unwrap() > 0.0);
    }

    #[test]
    fn large_power_uses_shifted_exponent() {
        let s = space(1.0, 2);
        // sinh((α − 1)r)/((α − 1) sinh r) for k = 2.
        let alpha = 700.0;
        let r = 1.0;
        let got = phi_real_alpha(&s, alpha, r, &cfg()).unwrap();
        let s1: f64 = alpha - 1.0;
        let expected_ln = s1 * r - (2.0 * s1).ln() - r.sinh().ln() + (1.0 - (-2.0 * s1 * r).exp()).ln();
        assert_relative_eq!(got.ln(), expected_ln, max_relative = 1e-10);
    }
}
