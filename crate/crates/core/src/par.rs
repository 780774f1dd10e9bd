//! Execution strategy for the data-parallel kernels.
//!
//! Every hot loop in the crate (cell-wise evaluation, window scans, value
//! sorting, Monte Carlo sampling, grid sweeps) goes through the helpers
//! here. With the `parallel` feature the helpers dispatch to rayon;
//! without it, or when [`Exec::Sequential`] is requested, they run the
//! same closures in order. Results never depend on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// True when work will actually be spread over the rayon pool.
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
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Order-preserving flat map over a slice.
pub fn flat_map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    items.iter().flat_map(f).collect()
}

/// Sort ascending by `f64::total_cmp`.
pub fn sort_f64(exec: Exec, values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        values.par_sort_unstable_by(f64::total_cmp);
        return;
    }
    let _ = exec;
    values.sort_unstable_by(f64::total_cmp);
}

/// Unstable sort of any `Ord` data.
pub fn sort<T: Ord + Send>(exec: Exec, values: &mut [T]) {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        values.par_sort_unstable();
        return;
    }
    let _ = exec;
    values.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..10_000).map(|i| (i * 7919) % 1013).collect();
        let a = map(Exec::Sequential, &xs, |x| x * x);
        let b = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);

        let mut s = xs.clone();
        let mut p = xs.clone();
        sort(Exec::Sequential, &mut s);
        sort(Exec::Parallel, &mut p);
        assert_eq!(s, p);

        let fm_s = flat_map(Exec::Sequential, &xs[..100], |&x| vec![x; (x % 3) as usize]);
        let fm_p = flat_map(Exec::Parallel, &xs[..100], |&x| vec![x; (x % 3) as usize]);
        assert_eq!(fm_s, fm_p);
    }
}
