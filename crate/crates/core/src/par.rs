//! Data-parallel loops with a sequential fallback.
//!
//! With the default `parallel` feature the hot per-source loops run on
//! rayon; without it they run as plain iterators. Callers always collect
//! into index order and reduce sequentially afterwards, so enabling or
//! disabling the feature (or changing the thread count) can never change a
//! result, only how long it takes.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}
