//! Sequential and data-parallel execution of the enumeration kernels.
//!
//! Every helper returns results in input order, so output is identical for
//! any worker count and for either mode. Without the `parallel` feature the
//! parallel mode runs sequentially.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving map over an index range.
pub fn map_range<R, F>(exec: Exec, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Smallest index in `range` for which `f` returns `Some`, with its value.
pub fn find_first<R, F>(exec: Exec, range: Range<u64>, f: F) -> Option<(u64, R)>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .find_map_first(|i| f(i).map(|r| (i, r)));
    }
    let _ = exec;
    range.into_iter().find_map(|i| f(i).map(|r| (i, r)))
}

/// Map-reduce over an index range; `reduce` must be associative.
pub fn fold_range<A, F, G>(exec: Exec, range: Range<u64>, identity: A, f: F, reduce: G) -> A
where
    A: Send + Sync + Clone,
    F: Fn(u64) -> A + Sync + Send,
    G: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .map(f)
            .reduce(|| identity.clone(), reduce);
    }
    let _ = exec;
    range.into_iter().map(f).fold(identity, reduce)
}
