//! Direct integration of the radial equation
//! `φ'' + (k/ρ) coth(r/ρ) φ' + λφ = 0`, `φ(0) = 1`, used as an independent
//! check on the kernel representation.
//!
//! The origin is a regular singular point, so the integrator starts at a
//! small `r₀` from the even power series and continues with an embedded
//! Dormand–Prince 5(4) pair.

use alloc::vec::Vec;

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::HyperbolicSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step; defaults to `0.05ρ`, shortened for large `|λ|`.
    pub h_max: Option<f64>,
    /// Series start point; defaults to `1e-4·ρ`.
    pub r_start: Option<f64>,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 0.0, h_max: None, r_start: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub r: f64,
    pub value: f64,
    pub derivative: f64,
}

/// Accepted integrator steps of one radial solution, in increasing `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    space: HyperbolicSpace,
    lambda: f64,
    entries: Vec<Sample>,
}

/// Behaviour of a real radial eigenfunction as `r → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Infinity,
    One,
    Zero,
}

/// Truncated even series `1 + a x² + c x⁴` (`x = r/ρ`, `μ = λρ²`) with
/// `a = −μ/(2(k+1))` and `c = μ(μ + 2k/3)/(8(k+1)(k+3))`, and its derivative in `r`.
pub fn series_start(space: &HyperbolicSpace, lambda: f64, r0: f64) -> Result<(f64, f64)> {
    let rho = space.rho();
    if !(r0 > 0.0 && r0 <= 1e-2 * rho) {
        return Err(Error::Usage("series start point must satisfy 0 < r0 <= 1e-2 rho"));
    }
    let lambda = ensure_finite("eigenvalue lambda", lambda)?;
    let k = space.kf();
    let mu = lambda * rho * rho;
    let a = -mu / (2.0 * (k + 1.0));
    let c = mu * (mu + 2.0 * k / 3.0) / (8.0 * (k + 1.0) * (k + 3.0));
    let x = r0 / rho;
    let x2 = x * x;
    let value = 1.0 + x2 * (a + c * x2);
    let derivative = x * (2.0 * a + 4.0 * c * x2) / rho;
    Ok((value, derivative))
}

fn second_derivative(space: &HyperbolicSpace, lambda: f64, r: f64, value: f64, derivative: f64) -> f64 {
    let rho = space.rho();
    -(space.kf() / rho) * derivative / (r / rho).tanh() - lambda * value
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 2];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates the radial equation from the series start to `r_max`.
pub fn solve_ode(space: &HyperbolicSpace, lambda: f64, r_max: f64, ctrl: &StepControl) -> Result<SampleTable> {
    let lambda = ensure_finite("eigenvalue lambda", lambda)?;
    let r_max = ensure_finite("integration horizon r_max", r_max)?;
    if r_max <= 0.0 {
        return Err(Error::Domain { what: "integration horizon r_max", value: r_max });
    }
    if !(ctrl.rtol > 0.0 && ctrl.atol >= 0.0) {
        return Err(Error::Domain { what: "ODE tolerance", value: ctrl.rtol });
    }
    let rho = space.rho();
    let r0 = ctrl.r_start.unwrap_or(1e-4 * rho).min(r_max);
    let (v0, d0) = series_start(space, lambda, r0)?;
    let h_max = ctrl.h_max.unwrap_or_else(|| 0.05 * rho * (1.0 / (rho * lambda.abs().sqrt())).min(1.0));

    let f = |r: f64, y: &State| -> State { [y[1], second_derivative(space, lambda, r, y[0], y[1])] };

    let mut entries = alloc::vec![Sample { r: r0, value: v0, derivative: d0 }];
    let mut r = r0;
    let mut y: State = [v0, d0];
    let mut k1 = f(r, &y);
    let mut h = (0.1 * r0).min(h_max);
    while r < r_max {
        let last = r + h >= r_max;
        if last {
            h = r_max - r;
        }
        let k2 = f(r + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(r + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(r + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(r + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(r + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let r_new = if last { r_max } else { r + h };
        let k7 = f(r_new, &y_new);

        // One joint scale for (φ, φ'): zeros of either component must not stall the step.
        let scale = (ctrl.atol + ctrl.rtol * y[0].abs().max(y[1].abs()).max(y_new[0].abs()).max(y_new[1].abs())).max(f64::MIN_POSITIVE);
        let err =
            (0..2).map(|i| (h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])).abs()).fold(0.0, f64::max)
                / scale;
        if !err.is_finite() {
            if h <= 1e-14 * r.max(rho) {
                return Err(Error::StepUnderflow { r });
            }
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            r = r_new;
            y = y_new;
            k1 = k7;
            entries.push(Sample { r, value: y[0], derivative: y[1] });
            if last {
                break;
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(h_max);
        if h <= 1e-14 * r.max(rho) {
            return Err(Error::StepUnderflow { r });
        }
    }
    Ok(SampleTable { space: *space, lambda, entries })
}

impl SampleTable {
    pub fn entries(&self) -> &[Sample] {
        &self.entries
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn space(&self) -> &HyperbolicSpace {
        &self.space
    }

    pub fn r_max(&self) -> f64 {
        self.entries[self.entries.len() - 1].r
    }

    /// Value at `r` by quintic Hermite interpolation on (φ, φ', φ''); the
    /// series covers `[0, r₀)`.
    pub fn value_at(&self, r: f64) -> Result<f64> {
        let first = self.entries[0];
        if r.is_nan() || r < 0.0 || r > self.r_max() {
            return Err(Error::Domain { what: "table radius r", value: r });
        }
        if r < first.r {
            return if r == 0.0 { Ok(1.0) } else { series_start(&self.space, self.lambda, r).map(|(v, _)| v) };
        }
        if self.entries.len() == 1 {
            return Ok(first.value);
        }
        let i = self.entries.partition_point(|s| s.r <= r).clamp(1, self.entries.len() - 1);
        Ok(self.interpolate(i - 1, r))
    }

    fn interpolate(&self, i: usize, r: f64) -> f64 {
        let (s0, s1) = (self.entries[i], self.entries[i + 1]);
        let h = s1.r - s0.r;
        let t = (r - s0.r) / h;
        let dd0 = second_derivative(&self.space, self.lambda, s0.r, s0.value, s0.derivative);
        let dd1 = second_derivative(&self.space, self.lambda, s1.r, s1.value, s1.derivative);
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
        s0.value * h0 + h * s0.derivative * h1 + h * h * dd0 * h2 + s1.value * h3 + h * s1.derivative * h4 + h * h * dd1 * h5
    }

    /// Zeros on `(0, r_max]`, each located by bisection on the interpolant.
    pub fn zeros(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.entries.len() - 1 {
            let (a, b) = (self.entries[i], self.entries[i + 1]);
            if b.value == 0.0 {
                out.push(b.r);
                continue;
            }
            if a.value == 0.0 || a.value.signum() == b.value.signum() {
                continue;
            }
            let (mut lo, mut hi) = (a.r, b.r);
            let lo_sign = a.value.signum();
            while hi - lo > 1e-13 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                let v = self.interpolate(i, mid);
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if v.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }
}

pub fn find_zeros(space: &HyperbolicSpace, lambda: f64, r_max: f64) -> Result<Vec<f64>> {
    Ok(solve_ode(space, lambda, r_max, &StepControl::default())?.zeros())
}

pub fn count_zeros(space: &HyperbolicSpace, lambda: f64, r_max: f64) -> Result<usize> {
    find_zeros(space, lambda, r_max).map(|z| z.len())
}

/// Potential of the Liouville normal form `U'' + QU = 0`, `U = sinh^{k/2}(r/ρ) φ`.
pub fn liouville_q(space: &HyperbolicSpace, lambda: f64, r: f64) -> Result<f64> {
    let r = ensure_finite("geodesic radius r", r)?;
    let k = space.kf();
    let rho2 = space.rho() * space.rho();
    let base = lambda - k * k / (4.0 * rho2);
    if space.k() == 2 && r >= 0.0 {
        return Ok(base);
    }
    if r <= 0.0 {
        return Err(Error::Domain { what: "geodesic radius r", value: r });
    }
    let s = (r / space.rho()).sinh();
    Ok(base - k * (k - 2.0) / (4.0 * rho2 * s * s))
}

pub fn limit_at_infinity(lambda: f64) -> Limit {
    if lambda < 0.0 {
        Limit::Infinity
    } else if lambda == 0.0 {
        Limit::One
    } else {
        Limit::Zero
    }
}
