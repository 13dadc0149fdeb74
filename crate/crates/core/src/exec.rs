//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature (default) [`Strategy::Parallel`] fans work out
//! over rayon's global pool. Without it every strategy runs sequentially.

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

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, keeping the `Some` results in index order.
pub fn filter_map_range<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().filter_map(f).collect(),
        _ => (0..n).filter_map(f).collect(),
    }
}

/// Splits `0..n` into contiguous chunks, folds each with `fold` and merges
/// the partial results with `merge`.
pub fn chunked_fold<A, F, M>(strategy: Strategy, n: usize, chunk: usize, fold: F, merge: M) -> A
where
    A: Send + Default,
    F: Fn(std::ops::Range<usize>) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    let run = |&s: &usize| fold(s..(s + chunk).min(n));
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => starts.par_iter().map(run).reduce(A::default, &merge),
        _ => starts.iter().map(run).fold(A::default(), &merge),
    }
}
