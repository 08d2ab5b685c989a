//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] dispatches to
//! rayon; without it both modes run on the calling thread. Results are
//! always collected in index order, so output never depends on scheduling.

use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this mode actually uses worker threads in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `range`, returning results in index order.
pub fn map_range<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Folds `range` into a sum. Each worker folds a contiguous chunk; chunk
/// results are then combined in index order.
pub fn sum_range<T, F>(exec: Exec, range: Range<u64>, zero: T, f: F) -> T
where
    T: Send + Sync + Clone + for<'a> std::ops::Add<&'a T, Output = T>,
    F: Fn(u64) -> T + Sync + Send,
{
    let len = range.end.saturating_sub(range.start);
    let chunks: u64 = if exec.is_parallel() { 64.min(len.max(1)) } else { 1 };
    let step = len.div_ceil(chunks).max(1);
    let partials = map_range(exec, 0..chunks, |c| {
        let lo = range.start + c * step;
        let hi = (lo + step).min(range.end);
        let mut acc = zero.clone();
        for i in lo..hi {
            acc = acc + &f(i);
        }
        acc
    });
    partials.into_iter().fold(zero, |acc, p| acc + &p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let seq = map_range(Exec::Sequential, 0..1000, |i| i * i);
        let par = map_range(Exec::Parallel, 0..1000, |i| i * i);
        assert_eq!(seq, par);
        let total: u64 = (0..1000u64).map(|i| i * 3).sum();
        assert_eq!(sum_range(Exec::Parallel, 0..1000, 0u64, |i| i * 3), total);
        assert_eq!(sum_range(Exec::Sequential, 0..1000, 0u64, |i| i * 3), total);
        assert_eq!(sum_range(Exec::Parallel, 5..5, 0u64, |i| i), 0);
    }
}
