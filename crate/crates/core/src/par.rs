//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon pool; without it every execution mode is sequential.

use crate::equality::decide_equal;
use crate::thread::LinearSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `(0..len).map(f)` in index order.
pub fn map_range<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// `items.iter().map(f)` in order.
pub fn map_slice<I, T, F>(items: &[I], exec: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_range(items.len(), exec, |i| f(&items[i]))
}

/// Equality decisions for a batch of spec pairs.
pub fn decide_equal_all(pairs: &[(LinearSpec, LinearSpec)], exec: Execution) -> Vec<bool> {
    map_slice(pairs, exec, |(p, q)| decide_equal(p, q))
}

/// Number of equivalence classes among `specs`, by pairwise comparison: a spec
/// counts iff it equals no earlier one.
pub fn count_distinct(specs: &[LinearSpec], exec: Execution) -> usize {
    map_range(specs.len(), exec, |i| {
        !specs[..i].iter().any(|q| decide_equal(&specs[i], q))
    })
    .into_iter()
    .filter(|&fresh| fresh)
    .count()
}
