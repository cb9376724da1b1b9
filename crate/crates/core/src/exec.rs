//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) work items run on a rayon pool of
//! the requested size. Without it, [`Execution::Parallel`] degrades to an
//! in-order loop over the same work items, so every result stays identical.

use std::time::Instant;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel {
        workers: usize,
    },
}

impl Execution {
    pub fn with_workers(workers: usize) -> Self {
        if workers <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel { workers }
        }
    }

    pub fn workers(&self) -> usize {
        match *self {
            Execution::Sequential => 1,
            Execution::Parallel { workers } => workers.max(1),
        }
    }

    /// Maps `f` over `items` and folds the results with `merge`, starting
    /// from `identity`. `merge` must be associative and commutative.
    pub fn map_reduce<I, T, F, M>(&self, items: Vec<I>, identity: T, f: F, merge: M) -> Result<T>
    where
        I: Send,
        T: Send + Sync + Clone,
        F: Fn(I) -> Result<T> + Sync + Send,
        M: Fn(T, T) -> T + Sync + Send,
    {
        match *self {
            Execution::Sequential => sequential(items, identity, f, merge),
            Execution::Parallel { workers } => parallel(workers, items, identity, f, merge),
        }
    }
}

fn sequential<I, T, F, M>(items: Vec<I>, identity: T, f: F, merge: M) -> Result<T>
where
    F: Fn(I) -> Result<T>,
    M: Fn(T, T) -> T,
{
    items
        .into_iter()
        .try_fold(identity, |acc, item| Ok(merge(acc, f(item)?)))
}

#[cfg(feature = "parallel")]
fn parallel<I, T, F, M>(workers: usize, items: Vec<I>, identity: T, f: F, merge: M) -> Result<T>
where
    I: Send,
    T: Send + Sync + Clone,
    F: Fn(I) -> Result<T> + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build thread pool");
    pool.install(|| {
        items
            .into_par_iter()
            .map(&f)
            .try_reduce(|| identity.clone(), |a, b| Ok(merge(a, b)))
    })
}

#[cfg(not(feature = "parallel"))]
fn parallel<I, T, F, M>(_workers: usize, items: Vec<I>, identity: T, f: F, merge: M) -> Result<T>
where
    F: Fn(I) -> Result<T>,
    M: Fn(T, T) -> T,
{
    sequential(items, identity, f, merge)
}

/// Optional wall-clock budget, polled cooperatively by long loops.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Self(None)
    }

    pub fn at(when: Instant) -> Self {
        Self(Some(when))
    }

    pub fn after(budget: std::time::Duration) -> Self {
        Self(Some(Instant::now() + budget))
    }

    #[inline]
    pub fn check(&self) -> Result<()> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Error::TimedOut),
            _ => Ok(()),
        }
    }
}

/// Splits [start, end) into `parts` contiguous, nearly equal pieces.
pub fn split_range(start: u64, end: u64, parts: usize) -> Vec<(u64, u64)> {
    let len = end.saturating_sub(start);
    let parts = (parts.max(1) as u64).min(len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut lo = start;
    for i in 0..parts {
        let hi = lo + base + u64::from(i < extra);
        out.push((lo, hi));
        lo = hi;
    }
    out
}
