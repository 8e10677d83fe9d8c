//! Deterministic replicate fan-out.
//!
//! Replicate `i` only ever sees `seed.replicate(i)`, and results come back
//! ordered by index, so the output is identical for every worker count.

use crate::seed::Seed;
use rayon::prelude::*;

/// Worker-count hint; `None` uses the global rayon pool.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Parallelism(pub Option<usize>);

impl Parallelism {
    pub fn threads(n: usize) -> Self {
        Parallelism(Some(n.max(1)))
    }

    pub fn install<R: Send, F: FnOnce() -> R + Send>(self, f: F) -> R {
        match self.0 {
            None => f(),
            Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        }
    }
}

/// Runs `f(index, seed.replicate(index))` for every replicate.
pub fn replicate<R, F>(reps: usize, seed: Seed, par: Parallelism, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, Seed) -> R + Sync + Send,
{
    par.install(|| (0..reps).into_par_iter().map(|i| f(i, seed.replicate(i))).collect())
}

/// Like [`replicate`], with one scratch value per worker task.
pub fn replicate_with<R, S, I, F>(reps: usize, seed: Seed, par: Parallelism, init: I, f: F) -> Vec<R>
where
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, Seed) -> R + Sync + Send,
{
    par.install(|| (0..reps).into_par_iter().map_init(&init, |s, i| f(s, i, seed.replicate(i))).collect())
}
