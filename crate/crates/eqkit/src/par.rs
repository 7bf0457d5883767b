//! Data-parallel helper used by grid sweeps and tensor fills.
//!
//! With the `parallel` feature (default) the mapping runs on the rayon pool;
//! without it the same code path degrades to a sequential loop. Output order
//! is the input index order in both cases, so results are deterministic
//! regardless of thread scheduling.

#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}
