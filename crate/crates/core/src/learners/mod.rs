//! Base and combiner learning algorithms.
//!
//! Four algorithms with known behavior under training-set perturbation:
//! k-nearest neighbors, ridge regression (normal equations), binary logistic
//! regression (full-batch gradient descent), and the decision stump
//! (exhaustive scan). Two diagnostic predictors, `Constant` and
//! `TrainingMean`, exist for estimator calibration; they are not learning
//! algorithms in the domain sense.

mod knn;
mod logistic;
mod ridge;
mod stump;

pub use knn::KnnModel;
pub use logistic::{fit_logistic, LogisticFit, LogisticModel};
pub use ridge::RidgeModel;
pub use stump::StumpModel;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Task};
use crate::error::{Error, Result};
use crate::loss::LossKind;
use crate::Predict;

fn default_true() -> bool {
    true
}
fn default_step() -> f64 {
    0.1
}
fn default_max_iters() -> usize {
    5000
}
fn default_tol() -> f64 {
    1e-8
}

/// Description of a learning algorithm and its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case", deny_unknown_fields)]
pub enum LearnerSpec {
    /// k-nearest neighbors. Distance ties break by training index.
    Knn { k: usize },
    /// Ridge with regularizer `lambda * m * I` over the augmented design
    /// (the intercept column, when enabled, is penalized with the rest so
    /// the normal equations hold exactly as written).
    Ridge {
        lambda: f64,
        #[serde(default = "default_true")]
        intercept: bool,
    },
    /// L2-regularized logistic regression, full-batch gradient descent with
    /// a fixed nominal step (backtracking keeps accepted steps monotone).
    Logistic {
        lambda: f64,
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default = "default_max_iters")]
        max_iters: usize,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_true")]
        intercept: bool,
    },
    /// Decision stump: best (feature, midpoint threshold, polarity) under
    /// weighted 0/1 error, scanned exhaustively.
    Stump,
}

impl LearnerSpec {
    pub fn knn(k: usize) -> Self {
        LearnerSpec::Knn { k }
    }

    pub fn ridge(lambda: f64) -> Self {
        LearnerSpec::Ridge {
            lambda,
            intercept: true,
        }
    }

    /// Ridge without an intercept column; the form a stacking combiner uses
    /// when the weighted-bagging equivalence must be exact.
    pub fn ridge_no_intercept(lambda: f64) -> Self {
        LearnerSpec::Ridge {
            lambda,
            intercept: false,
        }
    }

    pub fn logistic(lambda: f64) -> Self {
        LearnerSpec::Logistic {
            lambda,
            step: default_step(),
            max_iters: default_max_iters(),
            tol: default_tol(),
            intercept: true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::Knn { .. } => "knn",
            LearnerSpec::Ridge { .. } => "ridge",
            LearnerSpec::Logistic { .. } => "logistic",
            LearnerSpec::Stump => "stump",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LearnerSpec::Knn { k } => {
                if k == 0 {
                    return Err(Error::invalid_param("k", "must be >= 1"));
                }
            }
            LearnerSpec::Ridge { lambda, .. } => {
                if !(lambda > 0.0) {
                    return Err(Error::invalid_param("lambda", "ridge requires lambda > 0"));
                }
            }
            LearnerSpec::Logistic {
                lambda,
                step,
                max_iters,
                tol,
                ..
            } => {
                if !(lambda > 0.0) {
                    return Err(Error::invalid_param(
                        "lambda",
                        "logistic requires lambda > 0",
                    ));
                }
                if !(step > 0.0) {
                    return Err(Error::invalid_param("step", "must be > 0"));
                }
                if max_iters == 0 {
                    return Err(Error::invalid_param("max_iters", "must be >= 1"));
                }
                if !(tol > 0.0) {
                    return Err(Error::invalid_param("tol", "must be > 0"));
                }
            }
            LearnerSpec::Stump => {}
        }
        Ok(())
    }

    /// Whether the algorithm can be trained on the given task.
    pub fn supports(&self, task: Task) -> bool {
        match self {
            LearnerSpec::Knn { .. } => true,
            LearnerSpec::Ridge { .. } => matches!(task, Task::Regression | Task::Binary),
            LearnerSpec::Logistic { .. } | LearnerSpec::Stump => matches!(task, Task::Binary),
        }
    }
}

/// A fitted predictor. Prediction is a pure function of the stored
/// parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    Knn(KnnModel),
    Ridge(RidgeModel),
    Logistic(LogisticModel),
    Stump(StumpModel),
    /// Diagnostic: ignores the input entirely.
    Constant {
        value: f64,
        dim: usize,
        m: usize,
    },
    /// Diagnostic: the training-label mean, ignoring the input.
    TrainingMean {
        value: f64,
        dim: usize,
        m: usize,
    },
}

impl TrainedModel {
    pub fn dim(&self) -> usize {
        match self {
            TrainedModel::Knn(m) => m.dim(),
            TrainedModel::Ridge(m) => m.dim(),
            TrainedModel::Logistic(m) => m.dim(),
            TrainedModel::Stump(m) => m.dim(),
            TrainedModel::Constant { dim, .. } | TrainedModel::TrainingMean { dim, .. } => *dim,
        }
    }

    /// Size of the training set the model was fitted on.
    pub fn training_size(&self) -> usize {
        match self {
            TrainedModel::Knn(m) => m.training_size(),
            TrainedModel::Ridge(m) => m.training_size(),
            TrainedModel::Logistic(m) => m.training_size(),
            TrainedModel::Stump(m) => m.training_size(),
            TrainedModel::Constant { m, .. } | TrainedModel::TrainingMean { m, .. } => *m,
        }
    }
}

impl Predict for TrainedModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        match self {
            TrainedModel::Knn(m) => Ok(m.predict(x)),
            TrainedModel::Ridge(m) => Ok(m.predict(x)),
            TrainedModel::Logistic(m) => Ok(m.predict(x)),
            TrainedModel::Stump(m) => Ok(m.predict(x)),
            TrainedModel::Constant { value, .. } | TrainedModel::TrainingMean { value, .. } => {
                Ok(*value)
            }
        }
    }
}

fn validate_weights(weights: Option<&[f64]>, m: usize) -> Result<()> {
    if let Some(w) = weights {
        if w.len() != m {
            return Err(Error::BadWeights(format!(
                "expected {m} weights, got {}",
                w.len()
            )));
        }
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::BadWeights("weights must be finite and >= 0".into()));
        }
        if w.iter().sum::<f64>() <= 0.0 {
            return Err(Error::BadWeights("weight sum must be > 0".into()));
        }
    }
    Ok(())
}

/// Fit `spec` on `data`, optionally with per-example importances.
pub fn train(spec: &LearnerSpec, data: &Dataset, weights: Option<&[f64]>) -> Result<TrainedModel> {
    spec.validate()?;
    validate_weights(weights, data.len())?;
    if !spec.supports(data.task()) {
        return Err(Error::TaskUnsupported(format!(
            "{} cannot train a {:?} task",
            spec.name(),
            data.task()
        )));
    }
    match spec {
        LearnerSpec::Knn { k } => {
            if weights.is_some() {
                return Err(Error::BadWeights(
                    "knn does not support example weights".into(),
                ));
            }
            Ok(TrainedModel::Knn(knn::fit(*k, data)))
        }
        LearnerSpec::Ridge { lambda, intercept } => Ok(TrainedModel::Ridge(ridge::fit(
            *lambda, *intercept, data, weights,
        ))),
        LearnerSpec::Logistic {
            lambda,
            step,
            max_iters,
            tol,
            intercept,
        } => Ok(TrainedModel::Logistic(logistic::fit(
            *lambda, *step, *max_iters, *tol, *intercept, data, weights,
        ))),
        LearnerSpec::Stump => Ok(TrainedModel::Stump(stump::fit(data, weights))),
    }
}

/// Per-paper hypothesis-stability constant of a single learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityDescriptor {
    /// Stability value, or `None` when the paper states no constant.
    pub value: Option<f64>,
    /// Loss kind the caller asked about; the constants are quoted as given.
    pub loss: String,
    pub formula: &'static str,
    pub note: &'static str,
}

/// Hypothesis-stability descriptor for a learner at training size `m`:
/// `k/m` for k-NN, `1/(lambda m)` for ridge, unknown otherwise. The values
/// are the constants quoted for these algorithms and are flagged as such.
pub fn theoretical_stability(spec: &LearnerSpec, m: usize, kind: &LossKind) -> StabilityDescriptor {
    let (value, formula) = match spec {
        LearnerSpec::Knn { k } => (Some(*k as f64 / m as f64), "k/m"),
        LearnerSpec::Ridge { lambda, .. } => (Some(1.0 / (lambda * m as f64)), "1/(lambda*m)"),
        LearnerSpec::Logistic { .. } | LearnerSpec::Stump => (None, "unknown"),
    };
    StabilityDescriptor {
        value,
        loss: kind.name().to_string(),
        formula,
        note: if value.is_some() {
            "per-paper constant"
        } else {
            "no constant stated"
        },
    }
}
