//! Index-ordered data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the map runs on rayon; without it every
//! policy degrades to a plain loop. Results are always assembled by index.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExecPolicy {
    Sequential,
    /// `workers == 0` uses the global pool.
    Parallel { workers: usize },
    #[default]
    Auto,
}

impl ExecPolicy {
    pub fn with_workers(workers: usize) -> Self {
        if workers == 1 {
            ExecPolicy::Sequential
        } else {
            ExecPolicy::Parallel { workers }
        }
    }
}

/// `(0..n).map(f).collect()`, possibly evaluated concurrently.
pub fn map_indexed<T, F>(policy: ExecPolicy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match policy {
            ExecPolicy::Sequential => (0..n).map(f).collect(),
            ExecPolicy::Auto | ExecPolicy::Parallel { workers: 0 } => {
                (0..n).into_par_iter().map(f).collect()
            }
            ExecPolicy::Parallel { workers } => match rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
            {
                Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
                Err(_) => (0..n).map(f).collect(),
            },
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = policy;
        (0..n).map(f).collect()
    }
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
