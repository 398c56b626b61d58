//! Data-parallel map helpers with a sequential fallback.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How candidate evaluations are scheduled. Results never depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    #[default]
    Parallel,
}

pub(crate) fn filter_map<T, R, F>(items: &[T], strategy: Strategy, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy == Strategy::Parallel {
        return items.par_iter().filter_map(f).collect();
    }
    let _ = strategy;
    items.iter().filter_map(f).collect()
}

#[allow(dead_code)]
pub(crate) fn map<T, R, F>(items: &[T], strategy: Strategy, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    filter_map(items, strategy, |t| Some(f(t)))
}
