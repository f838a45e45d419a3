//! Batch evaluation, data-parallel when the `parallel` feature is enabled.

/// How a batch of independent evaluations is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` actually runs on a thread pool in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Evaluates `f(i, j)` over an `rows x cols` grid, row-major.
pub fn grid<R, F>(exec: Execution, rows: usize, cols: usize, f: F) -> Vec<Vec<R>>
where
    R: Send,
    F: Fn(usize, usize) -> R + Sync + Send,
{
    let cells: Vec<(usize, usize)> = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();
    let mut flat = map(exec, &cells, |&(i, j)| f(i, j)).into_iter();
    (0..rows).map(|_| flat.by_ref().take(cols).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map(Execution::Sequential, &items, |x| x * x);
        let b = map(Execution::Parallel, &items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 999 * 999);
        let g = grid(Execution::Parallel, 3, 4, |i, j| i * 10 + j);
        assert_eq!(g[2][3], 23);
        assert_eq!(g.len(), 3);
    }
}
