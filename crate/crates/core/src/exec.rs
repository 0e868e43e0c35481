//! Serial and parallel execution of per-chunk work.
//!
//! The parallel backend mirrors a single GPU thread block: `workers` threads
//! each own a contiguous range of `ceil(n / workers)` elements, and a call to
//! [`Executor::run`] returns only after every chunk has finished, which is the
//! barrier between phases.

use std::ops::Range;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable capping the worker count (useful on CI hosts).
pub const MAX_WORKERS_ENV: &str = "SMARTLAP_MAX_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Serial,
    Parallel,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Serial, Backend::Parallel];

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Serial => "serial",
            Backend::Parallel => "parallel",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "serial" => Ok(Backend::Serial),
            "parallel" => Ok(Backend::Parallel),
            other => Err(Error::Config(format!("unknown backend `{other}`"))),
        }
    }
}

/// Number of elements per chunk: `ceil(n / workers)`, at least 1.
pub fn chunk_len(n: usize, workers: usize) -> usize {
    n.div_ceil(workers.max(1)).max(1)
}

/// Contiguous split of `0..n` into exactly `workers` ranges of
/// `ceil(n / workers)` elements; trailing ranges may be short or empty.
pub fn chunk_ranges(n: usize, workers: usize) -> Vec<Range<usize>> {
    let len = chunk_len(n, workers);
    (0..workers.max(1))
        .map(|w| {
            let start = (w * len).min(n);
            start..((w + 1) * len).min(n)
        })
        .collect()
}

/// Applies the [`MAX_WORKERS_ENV`] cap, if set, to a requested worker count.
pub fn capped_workers(requested: usize) -> usize {
    let cap = std::env::var(MAX_WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c >= 1);
    match cap {
        Some(c) => requested.min(c).max(1),
        None => requested.max(1),
    }
}

/// Default worker count for the parallel backend: the machine's available
/// parallelism, capped by [`MAX_WORKERS_ENV`].
pub fn default_workers() -> usize {
    let n = std::thread::available_parallelism().map_or(1, |n| n.get());
    capped_workers(n)
}

pub struct Executor {
    workers: usize,
    pool: Option<ThreadPool>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers)
            .field("parallel", &self.pool.is_some())
            .finish()
    }
}

impl Executor {
    pub fn serial() -> Self {
        Executor {
            workers: 1,
            pool: None,
        }
    }

    /// Dedicated pool of exactly `workers` threads.
    pub fn parallel(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("smartlap-worker-{i}"))
            .build()
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
        Ok(Executor {
            workers,
            pool: Some(pool),
        })
    }

    pub fn new(backend: Backend, workers: usize) -> Result<Self> {
        match backend {
            Backend::Serial => Ok(Self::serial()),
            Backend::Parallel => Self::parallel(workers),
        }
    }

    /// Number of chunks work is split into; 1 for the serial backend.
    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        self.pool.is_some()
    }

    /// Chunk length for `n` elements under this executor.
    pub fn chunk_len(&self, n: usize) -> usize {
        chunk_len(n, self.workers)
    }

    /// Runs `f` on every item and returns the results in item order. Returns
    /// after all items are done.
    pub fn run<C, R, F>(&self, items: Vec<C>, f: F) -> Vec<R>
    where
        C: Send,
        R: Send,
        F: Fn(C) -> R + Sync + Send,
    {
        match &self.pool {
            Some(pool) if items.len() > 1 => pool.install(|| items.into_par_iter().map(&f).collect()),
            _ => items.into_iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_over_three() {
        assert_eq!(chunk_ranges(10, 3), vec![0..4, 4..8, 8..10]);
    }

    #[test]
    fn over_partition_yields_empty_tail() {
        let r = chunk_ranges(5, 8);
        assert_eq!(r.len(), 8);
        assert!(r[..5].iter().enumerate().all(|(i, c)| *c == (i..i + 1)));
        assert!(r[5..].iter().all(|c| c.is_empty()));
    }

    #[test]
    fn exact_division() {
        let r = chunk_ranges(100_000, 4);
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|c| c.len() == 25_000));
        assert_eq!(r[3].end, 100_000);
    }

    #[test]
    fn run_preserves_order() {
        let ex = Executor::parallel(3).unwrap();
        let out = ex.run((0..17).collect(), |i: i32| i * 2);
        assert_eq!(out, (0..17).map(|i| i * 2).collect::<Vec<_>>());
        assert_eq!(Executor::serial().run(vec![1, 2], |i| i + 1), vec![2, 3]);
    }

    #[test]
    fn zero_workers_rejected() {
        assert!(Executor::parallel(0).is_err());
    }

    #[test]
    fn backend_parses() {
        assert_eq!("Parallel".parse::<Backend>().unwrap(), Backend::Parallel);
        assert!("gpu".parse::<Backend>().is_err());
    }
}
