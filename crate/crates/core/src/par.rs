//! Execution strategy for the data-parallel loops in the crate.
//!
//! With the `parallel` feature (on by default) the [`Strategy::Parallel`]
//! variant fans work out over rayon's global pool. Without the feature it
//! silently degrades to the sequential path, so callers never need their own
//! `cfg` switches. Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How batch and split-search loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// True when work will actually be distributed over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_range<R, F>(strategy: Strategy, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..len).map(f).collect()
}

/// Sums `f(i)` over `0..len`.
pub fn sum_range<F>(strategy: Strategy, len: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    map_range(strategy, len, f).into_iter().sum()
}
