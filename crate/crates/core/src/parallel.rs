//! Worker pool for trial loops. `PERMCHECK_THREADS` caps the worker count
//! (unset or `0` lets rayon decide).

use rayon::prelude::*;

pub const THREADS_ENV: &str = "PERMCHECK_THREADS";

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs `f` inside a pool sized from the environment.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Evaluates `f` on every trial index, returning results in index order
/// regardless of how the work was scheduled.
pub fn map_trials<T: Send>(trials: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(f).collect()
}
