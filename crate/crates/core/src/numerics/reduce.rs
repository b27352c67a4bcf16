//! Reproducible parallel map/reduce.
//!
//! Jobs run on the rayon pool, results are collected in job order and folded
//! sequentially, so the outcome is bitwise identical to a sequential left
//! fold regardless of the number of worker threads.

use rayon::prelude::*;

/// Evaluate `job` for every input in parallel, preserving input order.
pub fn parallel_map<I, T, F>(inputs: &[I], job: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    inputs.par_iter().map(job).collect()
}

/// Run fallible `jobs` in parallel and left-fold their results with `combine`
/// starting from `identity`. The first failing job (in job order) is returned.
pub fn parallel_reduce<I, T, E, F, C>(inputs: &[I], identity: T, job: F, combine: C) -> Result<T, E>
where
    I: Sync,
    T: Send,
    E: Send,
    F: Fn(&I) -> Result<T, E> + Sync + Send,
    C: Fn(T, T) -> T,
{
    let results: Vec<Result<T, E>> = inputs.par_iter().map(job).collect();
    let mut acc = identity;
    for r in results {
        acc = combine(acc, r?);
    }
    Ok(acc)
}
