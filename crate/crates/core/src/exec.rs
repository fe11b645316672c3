//! Sequential and data-parallel execution of independent work items.
//!
//! With the `parallel` feature the parallel variant runs on a rayon pool
//! sized by `POLARLAB_THREADS` (default: all cores). Without it both
//! variants run sequentially. Results never depend on the variant.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Worker cap from `POLARLAB_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("POLARLAB_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[cfg(feature = "parallel")]
mod imp {
    use std::sync::OnceLock;

    use rayon::prelude::*;

    fn pool() -> &'static rayon::ThreadPool {
        static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
        POOL.get_or_init(|| {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = super::thread_limit() {
                builder = builder.num_threads(n);
            }
            builder.build().expect("thread pool")
        })
    }

    pub fn map_reduce<T, A, M, I, R>(items: &[T], map: M, identity: I, reduce: R) -> A
    where
        T: Sync,
        A: Send,
        M: Fn(&T) -> A + Sync + Send,
        I: Fn() -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        pool().install(|| items.par_iter().map(&map).reduce(&identity, &reduce))
    }

    pub fn map<T, U, M>(items: &[T], f: M) -> Vec<U>
    where
        T: Sync,
        U: Send,
        M: Fn(&T) -> U + Sync + Send,
    {
        pool().install(|| items.par_iter().map(f).collect())
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn map_reduce<T, A, M, I, R>(items: &[T], map: M, identity: I, reduce: R) -> A
    where
        M: Fn(&T) -> A,
        I: Fn() -> A,
        R: Fn(A, A) -> A,
    {
        items.iter().map(map).fold(identity(), reduce)
    }

    pub fn map<T, U, M>(items: &[T], f: M) -> Vec<U>
    where
        M: Fn(&T) -> U,
    {
        items.iter().map(f).collect()
    }
}

/// Map every item and fold the results with an associative `reduce`.
pub fn map_reduce<T, A, M, I, R>(execution: Execution, items: &[T], map: M, identity: I, reduce: R) -> A
where
    T: Sync,
    A: Send,
    M: Fn(&T) -> A + Sync + Send,
    I: Fn() -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    match execution {
        Execution::Sequential => items.iter().map(map).fold(identity(), reduce),
        Execution::Parallel => imp::map_reduce(items, map, identity, reduce),
    }
}

/// Map every item, keeping input order.
pub fn map<T, U, M>(execution: Execution, items: &[T], f: M) -> Vec<U>
where
    T: Sync,
    U: Send,
    M: Fn(&T) -> U + Sync + Send,
{
    match execution {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => imp::map(items, f),
    }
}

/// Fallible [`map`]; returns the first error in input order.
pub fn try_map<T, U, M>(execution: Execution, items: &[T], f: M) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    M: Fn(&T) -> Result<U> + Sync + Send,
{
    map(execution, items, f).into_iter().collect()
}
