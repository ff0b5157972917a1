use crate::bnb::{solve, SolveOptions, SolveResult};
use crate::sched::Instance;

/// Applies `f` to every item, on the rayon pool when the `parallel` feature is on.
/// Output order matches input order either way.
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_batch_sequential(items, f)
    }
}

pub fn map_batch_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

pub fn solve_batch(instances: &[Instance], options: &SolveOptions) -> Vec<SolveResult> {
    map_batch(instances, |inst| solve(inst, options))
}

pub fn solve_batch_sequential(instances: &[Instance], options: &SolveOptions) -> Vec<SolveResult> {
    map_batch_sequential(instances, |inst| solve(inst, options))
}
