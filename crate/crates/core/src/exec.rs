//! Execution strategy for the data-parallel kernels.
//!
//! Every kernel produces identical output under both strategies: work is
//! partitioned over an indexed domain and the per-chunk results are stitched
//! back together in domain order, so thread scheduling never leaks into
//! results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Maps `f` over the items, preserving input order in the output.
pub fn map_ordered<T, U, F>(strategy: Strategy, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.into_iter().map(f).collect(),
        Strategy::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

/// Maps `f` over the items and concatenates the per-item vectors in input
/// order.
pub fn flat_map_ordered<T, U, F>(strategy: Strategy, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Vec<U> + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.into_iter().flat_map(f).collect(),
        Strategy::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items
                    .into_par_iter()
                    .map(f)
                    .collect::<Vec<Vec<U>>>()
                    .into_iter()
                    .flatten()
                    .collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().flat_map(f).collect()
            }
        }
    }
}
