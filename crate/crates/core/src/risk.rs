//! Empirical, leave-one-out, and holdout error estimators.
//!
//! All reductions accumulate in fixed index order, so results are
//! bit-identical regardless of how many threads execute the folds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{remove_example, Dataset};
use crate::error::{Error, Result};
use crate::loss::{loss, LossKind};
use crate::rng::Seed;
use crate::{Predict, Trainer};

/// A Monte-Carlo mean with its standard error (`sample std / sqrt(n)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanWithError {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl MeanWithError {
    /// Mean and standard error of `values`, accumulated in slice order.
    pub fn from_values(values: &[f64]) -> MeanWithError {
        let n = values.len();
        assert!(n > 0, "mean of an empty sample");
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n < 2 {
            0.0
        } else {
            let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        };
        MeanWithError { mean, stderr, n }
    }
}

/// Training error: mean loss of `model` over the set it was fitted on.
pub fn empirical_error<P: Predict + ?Sized>(
    model: &P,
    data: &Dataset,
    kind: &LossKind,
) -> Result<f64> {
    let mut total = 0.0;
    for e in data.iter() {
        total += loss(kind, model.predict(&e.x)?, e)?;
    }
    Ok(total / data.len() as f64)
}

/// Leave-one-out error: each fold retrains the full recipe on `D^{\i}` with
/// a per-fold substream `seed.derive("loo", i)`, then scores on `z_i`.
///
/// Folds run in parallel; the mean is reduced in fold order.
pub fn loo_error<T>(trainer: &T, data: &Dataset, kind: &LossKind, seed: Seed) -> Result<f64>
where
    T: Trainer + Sync,
    T::Model: Send,
{
    let m = data.len();
    if m < 2 {
        return Err(Error::invalid_param("m", "leave-one-out requires m >= 2"));
    }
    let fold_losses: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let wrap = |e: Error| Error::LooFold {
                fold: i,
                source: Box::new(e),
            };
            let reduced = remove_example(data, i).map_err(wrap)?;
            let model = trainer
                .train(&reduced, seed.derive("loo", i as u64))
                .map_err(wrap)?;
            let e = data.example(i);
            let pred = model.predict(&e.x).map_err(wrap)?;
            loss(kind, pred, e).map_err(wrap)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(fold_losses.iter().sum::<f64>() / m as f64)
}

/// Monte-Carlo estimate of the generalization error on a held-out sample.
/// The holdout must be disjoint from the training set by construction.
pub fn holdout_risk<P: Predict + ?Sized>(
    model: &P,
    holdout: &Dataset,
    kind: &LossKind,
) -> Result<MeanWithError> {
    let mut losses = Vec::with_capacity(holdout.len());
    for e in holdout.iter() {
        losses.push(loss(kind, model.predict(&e.x)?, e)?);
    }
    Ok(MeanWithError::from_values(&losses))
}
