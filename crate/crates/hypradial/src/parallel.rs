//! Threaded Monte Carlo sphere averages.
//!
//! Each chunk owns its generator stream, and chunk statistics are merged in
//! index order, so the result is bit-identical to the sequential
//! [`hypradial_core::radialize::sphere_average`] for any thread count.

use std::num::NonZeroUsize;
use std::thread;

use hypradial_core::radialize::{RunningMoments, SphereSampler};
use hypradial_core::{Error, HyperbolicSpace, Result, SphereAverage};

pub fn default_threads() -> usize {
    thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

pub fn sphere_average(
    space: &HyperbolicSpace,
    alpha: f64,
    r: f64,
    n_samples: u64,
    seed: u64,
    u: &[f64],
    threads: usize,
) -> Result<SphereAverage> {
    if n_samples == 0 {
        return Err(Error::Domain { what: "sample count", value: 0.0 });
    }
    let sampler = SphereSampler::new(space, alpha, r, u, seed)?;
    let chunks: Vec<(u64, usize)> = SphereSampler::chunks(n_samples).collect();
    let threads = threads.clamp(1, chunks.len());
    let per_thread = chunks.len().div_ceil(threads);

    let mut partials = vec![RunningMoments::default(); chunks.len()];
    thread::scope(|scope| {
        for (slots, jobs) in partials.chunks_mut(per_thread).zip(chunks.chunks(per_thread)) {
            let sampler = &sampler;
            scope.spawn(move || {
                for (slot, &(index, count)) in slots.iter_mut().zip(jobs) {
                    *slot = sampler.chunk(index, count);
                }
            });
        }
    });
    Ok(partials.into_iter().fold(RunningMoments::default(), RunningMoments::merge).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypradial_core::radialize::{pole, sphere_average as sequential, CHUNK_SAMPLES};

    #[test]
    fn thread_count_does_not_change_the_result() {
        let s = HyperbolicSpace::new(1.0, 2).unwrap();
        let u = pole(&s);
        let n = 5 * CHUNK_SAMPLES as u64 + 123;
        let reference = sequential(&s, 1.5, 1.0, n, 9, &u).unwrap();
        for threads in [1, 2, 3, 8, 64] {
            assert_eq!(sphere_average(&s, 1.5, 1.0, n, 9, &u, threads).unwrap(), reference);
        }
    }

    #[test]
    fn rejects_empty_runs() {
        let s = HyperbolicSpace::new(1.0, 2).unwrap();
        assert!(sphere_average(&s, 1.0, 1.0, 0, 0, &pole(&s), 4).is_err());
    }
}
