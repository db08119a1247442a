//! Execution seam for grid sweeps.
//!
//! Frequency, time and angle sweeps are embarrassingly parallel and must be
//! bit-identical regardless of evaluation order, so the parallel path is a
//! pure order-preserving map with no shared accumulators. With the
//! `parallel` feature (default) [`map_grid`] fans out over rayon's pool;
//! without it both functions are the same sequential loop.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

/// Map a fallible function over a slice, preserving order.
#[cfg(feature = "parallel")]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map a fallible function over a slice, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    F: Fn(&T) -> Result<U>,
{
    items.iter().map(f).collect()
}

/// Sequential reference path, available regardless of features; used by the
/// benchmark suite to compare against the parallel map.
pub fn map_grid_seq<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    F: Fn(&T) -> Result<U>,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let xs: Vec<f64> = (0..1000).map(|i| 2.0 + i as f64 * 1e-3).collect();
        let f = |x: &f64| Ok(x.sin() * x.exp().ln_1p());
        let a = map_grid(&xs, f).unwrap();
        let b = map_grid_seq(&xs, f).unwrap();
        assert_eq!(a, b);
    }
}
