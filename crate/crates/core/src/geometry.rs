//! Ball-model coordinates and the chord geometry of the Schwarz kernel.

use core::f64::consts::{FRAC_PI_2, PI};

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure_finite, Error, Result};

/// The `(k+1)`-dimensional ball model of radius `ρ`, curvature `κ = −1/ρ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicSpace {
    rho: f64,
    k: u32,
    kappa: f64,
}

/// A Euclidean radius `η = |m|` inside the ball.
///
/// The gap `ρ − η` is carried separately: far from the origin `η` rounds to
/// `ρ` long before the geodesic radius stops being representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanRadius {
    eta: f64,
    gap: f64,
}

impl EuclideanRadius {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `ρ − η`, accurate to full relative precision.
    pub fn gap(&self) -> f64 {
        self.gap
    }
}

/// The chord through `m` in direction `ψ = ∠umO`, split by `m` into the
/// segments `q = |m − u|` and `l = |m − u*|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordGeometry {
    pub l: f64,
    pub q: f64,
    pub sum: f64,
    pub omega: f64,
}

impl HyperbolicSpace {
    pub fn new(rho: f64, k: u32) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::Domain { what: "model radius rho", value: rho });
        }
        if k == 0 {
            return Err(Error::Domain { what: "sphere dimension k", value: 0.0 });
        }
        Ok(Self { rho, k, kappa: -1.0 / (rho * rho) })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kf(&self) -> f64 {
        f64::from(self.k)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `−κk²/4`, the bottom of the oscillatory branch.
    pub fn critical_lambda(&self) -> f64 {
        let half_k = 0.5 * self.kf();
        half_k * half_k / (self.rho * self.rho)
    }

    pub fn eta_from_r(&self, r: f64) -> Result<EuclideanRadius> {
        let r = ensure_finite("geodesic radius r", r)?;
        if r < 0.0 {
            return Err(Error::Domain { what: "geodesic radius r", value: r });
        }
        let x = r / self.rho;
        let eta = self.rho * (0.5 * x).tanh();
        // ρ − ρ·tanh(x/2) = 2ρ/(eˣ + 1)
        let gap = 2.0 * self.rho / (x.exp() + 1.0);
        Ok(EuclideanRadius { eta, gap })
    }

    /// Validates a plain Euclidean radius `0 ≤ η < ρ`.
    pub fn euclidean_radius(&self, eta: f64) -> Result<EuclideanRadius> {
        let eta = ensure_finite("euclidean radius eta", eta)?;
        if eta < 0.0 || eta >= self.rho {
            return Err(Error::Domain { what: "euclidean radius eta", value: eta });
        }
        Ok(EuclideanRadius { eta, gap: self.rho - eta })
    }

    /// `r = ρ ln((ρ + η)/(ρ − η))`.
    pub fn r_from_eta(&self, radius: EuclideanRadius) -> f64 {
        let ratio = (2.0 * self.rho - radius.gap) / radius.gap;
        self.rho * ratio.ln()
    }

    /// `ρ² − η²`, the power of the point `m` with respect to the boundary sphere.
    pub fn power_of_point(&self, radius: EuclideanRadius) -> f64 {
        radius.gap * (2.0 * self.rho - radius.gap)
    }

    pub fn chord(&self, radius: EuclideanRadius, psi: f64) -> Result<ChordGeometry> {
        let psi = ensure_finite("chord angle psi", psi)?;
        if !(0.0..=FRAC_PI_2).contains(&psi) {
            return Err(Error::Domain { what: "chord angle psi", value: psi });
        }
        let cos_psi = psi.cos();
        let eta = radius.eta;
        // ρ² − η² sin²ψ = (ρ² − η²) + η² cos²ψ, which avoids cancellation near the boundary.
        let power = self.power_of_point(radius);
        let ec = eta * cos_psi;
        let h = (power + ec * ec).sqrt();
        let l = h + ec;
        // q = h − η cos ψ cancels too; use l·q = ρ² − η².
        let q = power / l;
        Ok(ChordGeometry { l, q, sum: l + q, omega: l * l / power })
    }

    /// `ω(θ) = (ρ² − η²)/(ρ² + η² − 2ρη cos θ)`, with `θ` the angle between
    /// `m` and the boundary point `u` seen from the origin.
    pub fn omega_theta(&self, radius: EuclideanRadius, theta: f64) -> Result<f64> {
        let theta = ensure_finite("polar angle theta", theta)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain { what: "polar angle theta", value: theta });
        }
        Ok(self.ln_omega_theta(radius, theta).exp())
    }

    /// `ln ω(θ)`; lies in `[−r/ρ, r/ρ]`.
    pub(crate) fn ln_omega_theta(&self, radius: EuclideanRadius, theta: f64) -> f64 {
        let s = (0.5 * theta).sin();
        // |m − u|² = (ρ − η)² + 4ρη sin²(θ/2)
        let dist2 = radius.gap * radius.gap + 4.0 * self.rho * radius.eta * s * s;
        self.power_of_point(radius).ln() - dist2.ln()
    }

    /// `σ_{k−1}/σ_k`: turns `∫₀^π f(θ) sin^{k−1}θ dθ` into a sphere mean.
    pub(crate) fn polar_normalization(&self) -> f64 {
        sphere_surface(self.k - 1, 1.0) / sphere_surface(self.k, 1.0)
    }
}

/// Surface volume of the `dim`-sphere of the given radius,
/// `2π^{(dim+1)/2}/Γ((dim+1)/2) · radius^dim`.
pub fn sphere_surface(dim: u32, radius: f64) -> f64 {
    let half = 0.5 * f64::from(dim + 1);
    2.0 * PI.powf(half) / libm::tgamma(half) * radius.powi(dim as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit(k: u32) -> HyperbolicSpace {
        HyperbolicSpace::new(1.0, k).unwrap()
    }

    #[test]
    fn rejects_bad_space() {
        assert!(HyperbolicSpace::new(0.0, 2).is_err());
        assert!(HyperbolicSpace::new(-1.0, 2).is_err());
        assert!(HyperbolicSpace::new(f64::NAN, 2).is_err());
        assert!(HyperbolicSpace::new(1.0, 0).is_err());
        let s = HyperbolicSpace::new(3.0, 4).unwrap();
        assert_eq!(s.kappa() * 9.0, -1.0);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(unit(2).eta_from_r(0.0).unwrap().eta(), 0.0);
        assert_relative_eq!(unit(2).eta_from_r(2.0).unwrap().eta(), 1.0f64.tanh(), max_relative = 1e-15);
        let far = HyperbolicSpace::new(2.0, 1).unwrap().eta_from_r(1e3).unwrap();
        assert!(far.eta() <= 2.0 && far.gap() > 0.0);
        assert!(unit(2).eta_from_r(-1e-3).is_err());
        assert!(unit(2).eta_from_r(f64::INFINITY).is_err());
    }

    #[test]
    fn r_from_eta_examples() {
        let s = unit(2);
        assert_eq!(s.r_from_eta(s.euclidean_radius(0.0).unwrap()), 0.0);
        let r = s.r_from_eta(s.euclidean_radius(0.5f64.tanh()).unwrap());
        assert_relative_eq!(r, 1.0, max_relative = 1e-14);
        assert!(s.euclidean_radius(1.0).is_err());
        assert!(s.euclidean_radius(-0.1).is_err());
    }

    #[test]
    fn round_trip_grid() {
        for rho in [0.5, 1.0, 3.0] {
            let s = HyperbolicSpace::new(rho, 3).unwrap();
            for i in 1..=200 {
                let r = 0.1 * f64::from(i);
                let back = s.r_from_eta(s.eta_from_r(r).unwrap());
                assert_relative_eq!(back, r, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn chord_examples() {
        let s = unit(2);
        let m = s.euclidean_radius(0.5).unwrap();
        let c = s.chord(m, 0.0).unwrap();
        assert_relative_eq!(c.l, 1.5, max_relative = 1e-15);
        assert_relative_eq!(c.q, 0.5, max_relative = 1e-15);
        assert_relative_eq!(c.omega, 3.0, max_relative = 1e-15);
        let c = s.chord(m, FRAC_PI_2).unwrap();
        assert_relative_eq!(c.l, 0.75f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.q, 0.75f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.omega, 1.0, max_relative = 1e-15);
        let c = s.chord(m, core::f64::consts::FRAC_PI_4).unwrap();
        assert_relative_eq!(c.l * c.q, 0.75, max_relative = 1e-14);
        assert!(s.chord(m, -0.1).is_err());
        assert!(s.chord(m, 1.6).is_err());
    }

    #[test]
    fn chord_invariants() {
        for rho in [1.0, 2.5] {
            let s = HyperbolicSpace::new(rho, 2).unwrap();
            for r in [0.01, 0.7, 3.0, 12.0] {
                let m = s.eta_from_r(r).unwrap();
                let eta = m.eta();
                let power = rho * rho - eta * eta;
                for j in 0..=40 {
                    let psi = FRAC_PI_2 * f64::from(j) / 40.0;
                    let c = s.chord(m, psi).unwrap();
                    assert!(c.l >= c.q * (1.0 - 1e-15) && c.q > 0.0);
                    assert_relative_eq!(c.l * c.q, s.power_of_point(m), max_relative = 1e-12);
                    assert_relative_eq!(c.l * c.q, power, max_relative = 1e-6);
                    let half_sum2 = 0.25 * c.sum * c.sum;
                    let sin_psi = psi.sin();
                    assert_relative_eq!(half_sum2, rho * rho - eta * eta * sin_psi * sin_psi, max_relative = 1e-12);
                    assert_relative_eq!(c.omega, s.power_of_point(m) / (c.q * c.q), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn chord_derivatives_by_finite_differences() {
        let s = unit(2);
        let m = s.euclidean_radius(0.6).unwrap();
        let eta = m.eta();
        let h = 1e-6;
        for j in 1..40 {
            let psi = 0.05 + (FRAC_PI_2 - 0.1) * f64::from(j) / 40.0;
            let c = s.chord(m, psi).unwrap();
            let plus = s.chord(m, psi + h).unwrap();
            let minus = s.chord(m, psi - h).unwrap();
            let dsum = (plus.sum - minus.sum) / (2.0 * h);
            assert_relative_eq!(dsum, -2.0 * eta * eta * (2.0 * psi).sin() / c.sum, max_relative = 1e-6);
            // dψ/d(ln ω) = (l + q)/(4η sin ψ); ln ω decreases along ψ.
            let dln = (plus.omega.ln() - minus.omega.ln()) / (2.0 * h);
            assert_relative_eq!((1.0 / dln).abs(), c.sum / (4.0 * eta * psi.sin()), max_relative = 1e-6);
        }
    }

    #[test]
    fn omega_theta_examples() {
        let s = unit(2);
        let m = s.euclidean_radius(0.5).unwrap();
        assert_relative_eq!(s.omega_theta(m, 0.0).unwrap(), 3.0, max_relative = 1e-15);
        assert_relative_eq!(s.omega_theta(m, PI).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        assert!(s.omega_theta(m, -0.1).is_err());
        for r in [0.1, 1.0, 5.0, 25.0] {
            let m = s.eta_from_r(r).unwrap();
            assert_relative_eq!(s.omega_theta(m, 0.0).unwrap().ln(), r, max_relative = 1e-12);
            let prod = s.omega_theta(m, 0.0).unwrap() * s.omega_theta(m, PI).unwrap();
            assert_relative_eq!(prod, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn omega_theta_decreasing_and_bounded() {
        let s = HyperbolicSpace::new(2.0, 3).unwrap();
        let m = s.eta_from_r(1.3).unwrap();
        let (eta, rho) = (m.eta(), 2.0);
        let lo = (rho - eta) / (rho + eta);
        let hi = (rho + eta) / (rho - eta);
        let mut prev = f64::INFINITY;
        for j in 0..=100 {
            let w = s.omega_theta(m, PI * f64::from(j) / 100.0).unwrap();
            assert!(w < prev);
            assert!(w >= lo * (1.0 - 1e-14) && w <= hi * (1.0 + 1e-14));
            prev = w;
        }
    }

    #[test]
    fn sphere_surface_examples() {
        assert_relative_eq!(sphere_surface(1, 1.0), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(2, 1.0), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(0, 1.0), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_surface(3, 2.0), 2.0 * PI * PI * 8.0, max_relative = 1e-14);
    }

    #[test]
    fn eta_strictly_increasing() {
        let s = unit(1);
        let mut prev = -1.0;
        for i in 0..400 {
            let e = s.eta_from_r(0.05 * f64::from(i)).unwrap().eta();
            assert!(e > prev || (e == prev && e == 1.0));
            prev = e;
        }
    }
}
