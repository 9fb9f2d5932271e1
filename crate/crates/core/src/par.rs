//! Data-parallel helpers with a sequential fallback.
//!
//! Only the map step runs in parallel. Results are collected in index order
//! and reduced sequentially, so sums are bitwise identical with and without
//! the `parallel` feature.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f(i)` for `i in 0..n`, returning results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Maps a slice element-wise, preserving order.
#[cfg(feature = "parallel")]
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    F: Fn(&S) -> T,
{
    items.iter().map(f).collect()
}

/// Ordered sum of `f(i)` for `i in 0..n`.
#[cfg(feature = "parallel")]
pub fn sum_indexed<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    map_indexed(n, f).into_iter().sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum_indexed<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64,
{
    (0..n).map(f).sum()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
