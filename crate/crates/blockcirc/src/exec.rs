//! Data-parallel execution helpers with a sequential fallback.
//!
//! With the default `parallel` feature the primary entry points fan out over
//! rayon; without it they alias the sequential versions. The `_seq` variants
//! are always available so benchmarks can compare both in one build.
//! Reductions used with these helpers must be order-independent (exact
//! integer sums, or float aggregates checked with tolerances).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `0..n` and collect results in index order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_collect_seq(n, f)
}

pub fn map_collect_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Fold `0..n` into per-worker accumulators and merge them.
#[cfg(feature = "parallel")]
pub fn fold_reduce<T, I, F, M>(n: usize, identity: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .fold(&identity, &fold)
        .reduce(&identity, &merge)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_reduce<T, I, F, M>(n: usize, identity: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    fold_reduce_seq(n, identity, fold, merge)
}

pub fn fold_reduce_seq<T, I, F, M>(n: usize, identity: I, fold: F, _merge: M) -> T
where
    I: Fn() -> T,
    F: Fn(T, usize) -> T,
    M: Fn(T, T) -> T,
{
    (0..n).fold(identity(), fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let sq = |i: usize| (i * i) as u64;
        let a: u64 = map_collect(1000, sq).iter().sum();
        let b: u64 = map_collect_seq(1000, sq).iter().sum();
        assert_eq!(a, b);

        let fold = |acc: u64, i: usize| acc + i as u64;
        let merge = |x: u64, y: u64| x + y;
        assert_eq!(
            fold_reduce(1000, || 0u64, fold, merge),
            fold_reduce_seq(1000, || 0u64, fold, merge)
        );
    }
}
