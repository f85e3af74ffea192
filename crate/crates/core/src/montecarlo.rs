//! Deterministic, parallelizable expectation engine.  Sample values are a
//! pure function of their index, collection preserves index order, and the
//! reduction is a fixed pairwise tree, so the result is bit-identical for any
//! worker count.

use rayon::prelude::*;
use thiserror::Error;

/// Batch size used when a target relative standard error is set.
pub const ADAPTIVE_BATCH: usize = 1000;

/// Monte Carlo sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    /// Samples to draw (the minimum when adaptive stopping is enabled).
    pub n_samples: usize,
    /// Root seed; every sample derives its own substream from it.
    pub root_seed: u64,
    /// Optional adaptive-stopping target for `std_error / |mean|`.
    pub target_rel_stderr: Option<f64>,
    /// Hard cap on the sample count when adaptive stopping is enabled.
    pub max_samples: usize,
    /// Worker threads; `None` uses the global thread pool.  The result does
    /// not depend on this value.
    pub workers: Option<usize>,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            root_seed: 0,
            target_rel_stderr: None,
            max_samples: 1_000_000,
            workers: None,
        }
    }
}

impl McSettings {
    pub fn new(n_samples: usize, root_seed: u64) -> Self {
        Self { n_samples, root_seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.n_samples == 0 {
            return Err(McError::InvalidSettings("n_samples must be positive".into()));
        }
        if self.n_samples > self.max_samples {
            return Err(McError::InvalidSettings(format!(
                "n_samples={} exceeds max_samples={}",
                self.n_samples, self.max_samples
            )));
        }
        if let Some(t) = self.target_rel_stderr {
            if !(t > 0.0 && t < 1.0) {
                return Err(McError::InvalidSettings(format!(
                    "target_rel_stderr={t} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("sample function returned a non-finite value at sample index {index}")]
    NonFinite { index: u64 },
    #[error("invalid Monte Carlo settings: {0}")]
    InvalidSettings(String),
}

/// Estimates `E[f]` where `f` maps a sample index to a value.
///
/// `f` must be pure and deterministic in its index.  Without a target, draws
/// exactly `n_samples`.  With `target_rel_stderr` set, draws `n_samples`
/// first and then extends in batches of [`ADAPTIVE_BATCH`] until the target
/// or `max_samples` is reached; the stopping rule depends only on batch
/// statistics, so it is deterministic too.
pub fn estimate<F>(f: F, settings: &McSettings) -> Result<McEstimate, McError>
where
    F: Fn(u64) -> f64 + Sync,
{
    settings.validate()?;
    let mut values: Vec<f64> = Vec::with_capacity(settings.n_samples);
    extend(&f, &mut values, settings.n_samples, settings.workers)?;
    if let Some(target) = settings.target_rel_stderr {
        loop {
            let (mean, std_error) = stats(&values);
            let met = std_error == 0.0 || (mean != 0.0 && std_error / mean.abs() <= target);
            if met || values.len() >= settings.max_samples {
                break;
            }
            let upto = (values.len() + ADAPTIVE_BATCH).min(settings.max_samples);
            extend(&f, &mut values, upto, settings.workers)?;
        }
    }
    let (mean, std_error) = stats(&values);
    Ok(McEstimate { mean, std_error, n_samples: values.len() })
}

fn extend<F>(
    f: &F,
    values: &mut Vec<f64>,
    upto: usize,
    workers: Option<usize>,
) -> Result<(), McError>
where
    F: Fn(u64) -> f64 + Sync,
{
    let start = values.len();
    // par_iter + collect preserves index order, so worker count cannot
    // influence the contents.
    let batch: Vec<f64> = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("failed to build worker pool")
            .install(|| (start..upto).into_par_iter().map(|i| f(i as u64)).collect()),
        None => (start..upto).into_par_iter().map(|i| f(i as u64)).collect(),
    };
    if let Some(pos) = batch.iter().position(|v| !v.is_finite()) {
        return Err(McError::NonFinite { index: (start + pos) as u64 });
    }
    values.extend_from_slice(&batch);
    Ok(())
}

/// Mean and standard error via order-fixed pairwise reduction.
fn stats(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = pairwise_sum(values, &|x| x) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss = pairwise_sum(values, &|x| (x - mean) * (x - mean));
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn pairwise_sum(values: &[f64], map: &impl Fn(f64) -> f64) -> f64 {
    if values.len() <= 64 {
        return values.iter().map(|&x| map(x)).sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid], map) + pairwise_sum(&values[mid..], map)
}
