//! Reproducible parallel trials.
//!
//! Trials are cut into fixed-size chunks and chunk `c` draws from the
//! ChaCha stream `c` of the run seed, so results depend on the seed and the
//! trial count but not on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials per chunk; each chunk owns one RNG stream.
pub const CHUNK: usize = 256;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `trials` calls of `step` over per-chunk accumulators and merges
/// the chunk results in chunk order.
pub fn fold_trials<A, I, S, M>(trials: usize, seed: u64, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &mut ChaCha8Rng) + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let mut acc = init();
            let len = CHUNK.min(trials - c * CHUNK);
            for _ in 0..len {
                step(&mut acc, &mut rng);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

/// One value per trial, in trial order.
pub fn map_trials<T, F>(trials: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    fold_trials(
        trials,
        seed,
        Vec::new,
        |acc: &mut Vec<T>, rng| acc.push(f(rng)),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn independent_of_thread_count() {
        let run = || map_trials(1000, 7, |r| r.gen::<u64>());
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
    }

    #[test]
    fn streams_differ() {
        let mut a = stream_rng(1, 0);
        let mut b = stream_rng(1, 1);
        assert_ne!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn fold_counts() {
        let total = fold_trials(1000, 3, || 0u64, |a, _| *a += 1, |a, b| a + b);
        assert_eq!(total, 1000);
    }
}
