//! Index-range scans over the canonical profile enumeration.
//!
//! A scan asks a predicate for a witness at each index and returns the
//! witness with the smallest index (in scan order), so results do not depend
//! on how many workers ran. With the `parallel` feature disabled every scan
//! runs sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of profiles a scan may visit.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the global rayon pool, or a dedicated pool of `workers` threads.
    Parallel {
        workers: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        Execution::Parallel { workers: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    /// Maximum number of profiles visited.
    pub budget: u64,
    /// When the domain exceeds the budget, sample `budget` profiles with
    /// this seed instead of failing.
    pub seed: Option<u64>,
    pub execution: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            budget: DEFAULT_BUDGET,
            seed: None,
            execution: Execution::default(),
        }
    }
}

impl ScanConfig {
    pub fn sequential() -> Self {
        ScanConfig {
            execution: Execution::Sequential,
            ..ScanConfig::default()
        }
    }
}

/// What part of the domain a scan covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "scan", rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive { profiles: u64 },
    Sampled { seed: u64, samples: u64, total: u64 },
}

impl Coverage {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Coverage::Exhaustive { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Coverage::Exhaustive { profiles } => format!("exhaustive ({profiles} profiles)"),
            Coverage::Sampled { seed, samples, total } => {
                format!("sampled ({samples} of {total} profiles, seed {seed})")
            }
        }
    }
}

/// Result of a scan: the first witness, if any, and the coverage.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanOutcome<W> {
    pub witness: Option<W>,
    pub coverage: Coverage,
}

/// Scans `0..total`, or a seeded sample of it when `total` exceeds the
/// budget. Without a seed an oversized domain is scanned up to the budget; a
/// witness found there is still returned, otherwise the scan fails with
/// [`Error::BudgetExceeded`] reporting the scanned fraction.
pub fn scan_indices<W, F>(total: u64, config: &ScanConfig, probe: F) -> Result<ScanOutcome<W>>
where
    W: Send,
    F: Fn(u64) -> Result<Option<W>> + Sync + Send,
{
    if total <= config.budget {
        let witness = first_witness(0..total, config.execution, &probe)?;
        return Ok(ScanOutcome {
            witness,
            coverage: Coverage::Exhaustive { profiles: total },
        });
    }
    match config.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<u64> = (0..config.budget).map(|_| rng.random_range(0..total)).collect();
            let witness = first_witness_in(&sample, config.execution, &probe)?;
            Ok(ScanOutcome {
                witness,
                coverage: Coverage::Sampled {
                    seed,
                    samples: config.budget,
                    total,
                },
            })
        }
        None => match first_witness(0..config.budget, config.execution, &probe)? {
            Some(w) => Ok(ScanOutcome {
                witness: Some(w),
                coverage: Coverage::Exhaustive {
                    profiles: config.budget,
                },
            }),
            None => Err(Error::BudgetExceeded {
                budget: config.budget,
                detail: format!(
                    "domain has {total} profiles; scanned fraction {:.6}",
                    config.budget as f64 / total as f64
                ),
            }),
        },
    }
}

fn lift<W>(r: Result<Option<W>>) -> Option<Result<W>> {
    match r {
        Ok(None) => None,
        Ok(Some(w)) => Some(Ok(w)),
        Err(e) => Some(Err(e)),
    }
}

fn first_witness<W, F>(range: std::ops::Range<u64>, execution: Execution, probe: &F) -> Result<Option<W>>
where
    W: Send,
    F: Fn(u64) -> Result<Option<W>> + Sync + Send,
{
    match execution {
        Execution::Sequential => range.map(probe).find_map(lift).transpose(),
        Execution::Parallel { workers } => parallel::first_in_range(range, workers, probe),
    }
}

fn first_witness_in<W, F>(indices: &[u64], execution: Execution, probe: &F) -> Result<Option<W>>
where
    W: Send,
    F: Fn(u64) -> Result<Option<W>> + Sync + Send,
{
    match execution {
        Execution::Sequential => indices.iter().map(|&i| probe(i)).find_map(lift).transpose(),
        Execution::Parallel { workers } => parallel::first_in_slice(indices, workers, probe),
    }
}

/// Maps `f` over `0..total` keeping index order.
pub fn map_indices<T, F>(total: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..total).map(f).collect(),
        Execution::Parallel { workers } => parallel::map_range(total, workers, f),
    }
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    use super::lift;
    use crate::error::Result;

    fn with_pool<R: Send>(workers: Option<usize>, job: impl FnOnce() -> R + Send) -> R {
        match workers {
            None => job(),
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .expect("thread pool")
                .install(job),
        }
    }

    pub(super) fn first_in_range<W, F>(
        range: std::ops::Range<u64>,
        workers: Option<usize>,
        probe: &F,
    ) -> Result<Option<W>>
    where
        W: Send,
        F: Fn(u64) -> Result<Option<W>> + Sync + Send,
    {
        with_pool(workers, || {
            range.into_par_iter().map(probe).find_map_first(lift).transpose()
        })
    }

    pub(super) fn first_in_slice<W, F>(indices: &[u64], workers: Option<usize>, probe: &F) -> Result<Option<W>>
    where
        W: Send,
        F: Fn(u64) -> Result<Option<W>> + Sync + Send,
    {
        with_pool(workers, || {
            indices.par_iter().map(|&i| probe(i)).find_map_first(lift).transpose()
        })
    }

    pub(super) fn map_range<T, F>(total: u64, workers: Option<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        with_pool(workers, || {
            (0..total as usize).into_par_iter().map(|i| f(i as u64)).collect()
        })
    }
}

#[cfg(not(feature = "parallel"))]
mod parallel {
    use super::lift;
    use crate::error::Result;

    pub(super) fn first_in_range<W, F>(
        range: std::ops::Range<u64>,
        _workers: Option<usize>,
        probe: &F,
    ) -> Result<Option<W>>
    where
        F: Fn(u64) -> Result<Option<W>>,
    {
        range.map(probe).find_map(lift).transpose()
    }

    pub(super) fn first_in_slice<W, F>(indices: &[u64], _workers: Option<usize>, probe: &F) -> Result<Option<W>>
    where
        F: Fn(u64) -> Result<Option<W>>,
    {
        indices.iter().map(|&i| probe(i)).find_map(lift).transpose()
    }

    pub(super) fn map_range<T, F>(total: u64, _workers: Option<usize>, f: F) -> Vec<T>
    where
        F: Fn(u64) -> T,
    {
        (0..total).map(f).collect()
    }
}
