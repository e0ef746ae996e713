//! Executable form of the bag-stacking / weighted-bagging identity.
//!
//! Bag-stacking with a linear least-squares combiner (no intercept) and a
//! weighted-bagging fit on the same seeded members minimize the same
//! objective: the combiner solves `(F^T F + lambda_c m I) theta = F^T y`
//! over the meta-features `F`, and the weighted fit solves
//! `(F^T F + lambda_reg I) theta = F^T y`. With `lambda_c = lambda_reg / m`
//! the two systems coincide, so theta and all predictions must agree to
//! numerical precision. For binary tasks the same pairing holds between a
//! no-intercept logistic combiner and the cross-entropy weighted fit. This
//! check trains both routes and reports the largest discrepancies.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Task};
use crate::ensembles::stacking::{stacked_sampling_train, SamplingMode, StackingRecipe};
use crate::ensembles::weighted::weighted_bagging_fit;
use crate::ensembles::Aggregation;
use crate::error::{Error, Result};
use crate::learners::{LearnerSpec, TrainedModel};
use crate::rng::Seed;
use crate::Predict;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceOutcome {
    pub theta_stacking: Vec<f64>,
    pub theta_weighted: Vec<f64>,
    pub max_theta_diff: f64,
    pub max_prediction_diff: f64,
    pub probe_points: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Train bag-stacking and weighted bagging on identical seeded members and
/// compare mixture weights and predictions over `probes`.
///
/// `self_test_perturbation` shifts the first weighted coordinate before the
/// comparison; a nonzero value must make the check fail, which exercises
/// the detector itself.
#[allow(clippy::too_many_arguments)]
pub fn check_weighted_bagging_equivalence(
    base_spec: &LearnerSpec,
    data: &Dataset,
    t: usize,
    lambda_reg: f64,
    probes: &[Vec<f64>],
    tolerance: f64,
    seed: Seed,
    self_test_perturbation: f64,
) -> Result<EquivalenceOutcome> {
    if !(lambda_reg >= 0.0) {
        return Err(Error::invalid_param("lambda_reg", "must be >= 0"));
    }
    // lambda = 0 is allowed: a subnormal stand-in keeps the spec validator
    // happy while leaving the arithmetic bit-identical to the plain system.
    let positive = lambda_reg.max(f64::MIN_POSITIVE);
    let m = data.len() as f64;
    let combiner = match data.task() {
        Task::Regression => LearnerSpec::ridge_no_intercept(positive / m),
        Task::Binary => {
            let mut spec = LearnerSpec::logistic(positive);
            if let LearnerSpec::Logistic { intercept, .. } = &mut spec {
                *intercept = false;
            }
            spec
        }
        Task::Multiclass => {
            return Err(Error::TaskUnsupported(
                "equivalence is defined for regression and binary tasks".into(),
            ))
        }
    };
    let recipe = StackingRecipe::new(vec![base_spec.clone(); t], combiner)
        .with_sampling(SamplingMode::Bootstrap);
    let stacked = stacked_sampling_train(&recipe, data, seed)?;

    let theta_stacking: Vec<f64> = match &stacked.aggregation {
        Aggregation::Combiner {
            model: TrainedModel::Ridge(r),
        } => r.weights().to_vec(),
        Aggregation::Combiner {
            model: TrainedModel::Logistic(l),
        } => l.weights().to_vec(),
        _ => {
            return Err(Error::Invalid(
                "equivalence is only defined for a linear no-intercept combiner".into(),
            ))
        }
    };

    let mut weighted =
        weighted_bagging_fit(stacked.members.clone(), data, data.task(), lambda_reg)?;
    if self_test_perturbation != 0.0 {
        if let Aggregation::Weighted { theta } = &mut weighted.aggregation {
            theta[0] += self_test_perturbation;
        }
    }
    let theta_weighted: Vec<f64> = match &weighted.aggregation {
        Aggregation::Weighted { theta } => theta.clone(),
        _ => unreachable!(),
    };

    let max_theta_diff = theta_stacking
        .iter()
        .zip(&theta_weighted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let mut max_prediction_diff = 0.0f64;
    for x in probes {
        let a = stacked.predict(x)?;
        let b = weighted.predict(x)?;
        max_prediction_diff = max_prediction_diff.max((a - b).abs());
    }

    Ok(EquivalenceOutcome {
        pass: max_theta_diff <= tolerance && max_prediction_diff <= tolerance,
        theta_stacking,
        theta_weighted,
        max_theta_diff,
        max_prediction_diff,
        probe_points: probes.len(),
        tolerance,
    })
}
