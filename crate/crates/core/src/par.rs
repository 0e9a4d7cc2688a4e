//! Data-parallel helpers. With the `parallel` feature (default) work is spread
//! over the rayon pool; without it, or under [`Strategy::Sequential`], the
//! same closures run in order on the calling thread. Results are identical
//! either way because every reduction here is an ordered collect or an
//! integer sum.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether work will actually fan out.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub fn map_collect<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
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

pub fn map_range<R, F>(strategy: Strategy, n: u32, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u32) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..n).map(f).collect()
}

pub fn sum_range<F>(strategy: Strategy, n: u32, f: F) -> u64
where
    F: Fn(u32) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = strategy;
    (0..n).map(f).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let a = sum_range(Strategy::Parallel, 1000, |i| (i as u64) * 3);
        let b = sum_range(Strategy::Sequential, 1000, |i| (i as u64) * 3);
        assert_eq!(a, b);
        let v: Vec<u32> = (0..50).collect();
        assert_eq!(map_collect(Strategy::Parallel, &v, |x| x * x), map_collect(Strategy::Sequential, &v, |x| x * x));
    }
}
