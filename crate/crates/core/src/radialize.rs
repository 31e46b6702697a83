//! Monte Carlo radialization of the kernel eigenfunction `x ↦ ω(x, u)^α`.
//!
//! Averaging over the Euclidean sphere `|x| = η(r)` must reproduce the radial
//! eigenfunction `φ(r)` for the same `α`. Samples are split into fixed-size
//! chunks, each drawn from its own ChaCha stream keyed by `(seed, chunk)`, so
//! the merged estimate does not depend on how chunks are scheduled.

use alloc::vec;
use alloc::vec::Vec;

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::HyperbolicSpace;

/// Samples per generator stream.
pub const CHUNK_SAMPLES: usize = 1 << 14;

/// A point of the open ball, `(k+1)` Euclidean coordinates with `|x| < ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint(Vec<f64>);

impl BallPoint {
    pub fn new(space: &HyperbolicSpace, coordinates: Vec<f64>) -> Result<Self> {
        check_dimension(space, &coordinates)?;
        let norm = euclidean_norm(&coordinates);
        if norm >= space.rho() {
            return Err(Error::Domain { what: "ball point norm", value: norm });
        }
        Ok(Self(coordinates))
    }

    pub fn origin(space: &HyperbolicSpace) -> Self {
        Self(vec![0.0; space.k() as usize + 1])
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.0
    }
}

fn check_dimension(space: &HyperbolicSpace, coordinates: &[f64]) -> Result<()> {
    if coordinates.len() != space.k() as usize + 1 {
        return Err(Error::Usage("point must have k + 1 coordinates"));
    }
    for &c in coordinates {
        ensure_finite("coordinate", c)?;
    }
    Ok(())
}

fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn check_boundary(space: &HyperbolicSpace, u: &[f64]) -> Result<()> {
    check_dimension(space, u)?;
    let norm = euclidean_norm(u);
    if (norm - space.rho()).abs() > 1e-12 * space.rho() {
        return Err(Error::Domain { what: "boundary point norm", value: norm });
    }
    Ok(())
}

/// `((ρ² − |x|²)/|x − u|²)^α` for a boundary point `|u| = ρ`.
pub fn kernel_eigenfunction(space: &HyperbolicSpace, x: &BallPoint, u: &[f64], alpha: f64) -> Result<f64> {
    check_boundary(space, u)?;
    let alpha = ensure_finite("kernel power alpha", alpha)?;
    let rho = space.rho();
    let x2: f64 = x.0.iter().map(|c| c * c).sum();
    let dist2: f64 = x.0.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(((rho * rho - x2) / dist2).powf(alpha))
}

/// Streaming mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningMoments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise merge; merging chunks in a fixed order gives a fixed result.
    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb, nf) = (self.count as f64, other.count as f64, n as f64);
        Self { count: n, mean: self.mean + delta * nb / nf, m2: self.m2 + other.m2 + delta * delta * na * nb / nf }
    }

    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m2.max(0.0) / (n - 1.0) / n).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereAverage {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl From<RunningMoments> for SphereAverage {
    fn from(m: RunningMoments) -> Self {
        Self { mean: m.mean, stderr: m.standard_error(), samples: m.count }
    }
}

/// Draws uniform points on the sphere `|x| = η(r)` and evaluates the kernel
/// eigenfunction there.
#[derive(Debug, Clone)]
pub struct SphereSampler<'a> {
    space: HyperbolicSpace,
    alpha: f64,
    eta: f64,
    power: f64,
    u: &'a [f64],
    seed: u64,
}

impl<'a> SphereSampler<'a> {
    pub fn new(space: &HyperbolicSpace, alpha: f64, r: f64, u: &'a [f64], seed: u64) -> Result<Self> {
        check_boundary(space, u)?;
        let alpha = ensure_finite("kernel power alpha", alpha)?;
        let radius = space.eta_from_r(r)?;
        Ok(Self { space: *space, alpha, eta: radius.eta(), power: space.power_of_point(radius), u, seed })
    }

    /// `(index, count)` of the chunks covering `n` samples.
    pub fn chunks(n: u64) -> impl Iterator<Item = (u64, usize)> {
        let size = CHUNK_SAMPLES as u64;
        (0..n.div_ceil(size)).map(move |i| (i, (n - i * size).min(size) as usize))
    }

    pub fn chunk(&self, index: u64, count: usize) -> RunningMoments {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let dim = self.u.len();
        let rho = self.space.rho();
        let mut g = vec![0.0; dim];
        let mut moments = RunningMoments::default();
        for _ in 0..count {
            let norm = loop {
                for gi in g.iter_mut() {
                    *gi = rng.sample(StandardNormal);
                }
                let n = euclidean_norm(&g);
                if n > 0.0 {
                    break n;
                }
            };
            // |x − u|² = ρ² + η² − 2η (ĝ·u)
            let dot: f64 = g.iter().zip(self.u).map(|(a, b)| a * b).sum::<f64>() / norm;
            let dist2 = rho * rho + self.eta * self.eta - 2.0 * self.eta * dot;
            moments.push((self.power / dist2).powf(self.alpha));
        }
        moments
    }
}

/// Sample mean and standard error of the kernel eigenfunction over the
/// geodesic sphere of radius `r` about the origin.
pub fn sphere_average(space: &HyperbolicSpace, alpha: f64, r: f64, n_samples: u64, seed: u64, u: &[f64]) -> Result<SphereAverage> {
    if n_samples == 0 {
        return Err(Error::Domain { what: "sample count", value: 0.0 });
    }
    let sampler = SphereSampler::new(space, alpha, r, u, seed)?;
    let moments =
        SphereSampler::chunks(n_samples).map(|(i, count)| sampler.chunk(i, count)).fold(RunningMoments::default(), RunningMoments::merge);
    Ok(moments.into())
}

/// The boundary point `(ρ, 0, …, 0)`.
pub fn pole(space: &HyperbolicSpace) -> Vec<f64> {
    let mut u = vec![0.0; space.k() as usize + 1];
    u[0] = space.rho();
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_examples() {
        let s = HyperbolicSpace::new(1.0, 2).unwrap();
        let u = pole(&s);
        assert_eq!(kernel_eigenfunction(&s, &BallPoint::origin(&s), &u, 3.7).unwrap(), 1.0);
        let x = BallPoint::new(&s, vec![0.5, 0.0, 0.0]).unwrap();
        assert_eq!(kernel_eigenfunction(&s, &x, &u, 0.0).unwrap(), 1.0);
        assert_relative_eq!(kernel_eigenfunction(&s, &x, &u, 1.0).unwrap(), 3.0, max_relative = 1e-15);
        assert!(kernel_eigenfunction(&s, &x, &[0.9, 0.0, 0.0], 1.0).is_err());
        assert!(kernel_eigenfunction(&s, &x, &[1.0, 0.0], 1.0).is_err());
        assert!(BallPoint::new(&s, vec![1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn zero_power_is_exact() {
        let s = HyperbolicSpace::new(1.0, 3).unwrap();
        let avg = sphere_average(&s, 0.0, 2.0, 1000, 7, &pole(&s)).unwrap();
        assert_eq!(avg.mean, 1.0);
        assert_eq!(avg.stderr, 0.0);
        assert!(sphere_average(&s, 1.0, 2.0, 0, 7, &pole(&s)).is_err());
    }

    #[test]
    fn chunking_covers_all_samples() {
        let chunks: Vec<_> = SphereSampler::chunks(2 * CHUNK_SAMPLES as u64 + 5).collect();
        assert_eq!(chunks, vec![(0, CHUNK_SAMPLES), (1, CHUNK_SAMPLES), (2, 5)]);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| (f64::from(i) * 0.37).sin()).collect();
        let mut all = RunningMoments::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = RunningMoments::default();
        let mut b = RunningMoments::default();
        xs[..31].iter().for_each(|&x| a.push(x));
        xs[31..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert_eq!(merged.count, 100);
        assert_relative_eq!(merged.mean, all.mean, max_relative = 1e-13);
        assert_relative_eq!(merged.m2, all.m2, max_relative = 1e-12);
    }

    #[test]
    fn deterministic_in_seed() {
        let s = HyperbolicSpace::new(1.0, 2).unwrap();
        let a = sphere_average(&s, 1.5, 1.0, 5000, 42, &pole(&s)).unwrap();
        let b = sphere_average(&s, 1.5, 1.0, 5000, 42, &pole(&s)).unwrap();
        let c = sphere_average(&s, 1.5, 1.0, 5000, 43, &pole(&s)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.mean, c.mean);
    }
}
