//! Ensemble constructions: bagging, subbagging, AdaBoost.M1, stacking,
//! bag-stacking, dag-stacking, and weighted bagging.
//!
//! Every ensemble is an [`EnsembleModel`]: first-level members plus an
//! aggregation rule. Member training draws replicate `t` from the substream
//! `seed.derive("member", t)`, identically across all constructions, so two
//! ensembles built from the same seed share their replicates.

mod adaboost;
mod bagging;
mod equivalence;
mod stacking;
mod weighted;

pub use adaboost::{adaboost_alpha, adaboost_train};
pub use bagging::{bagging_train, subbagging_train};
pub use equivalence::{check_weighted_bagging_equivalence, EquivalenceOutcome};
pub use stacking::{
    meta_dataset, stacked_sampling_train, stacking_train, SamplingMode, StackingRecipe,
};
pub use weighted::weighted_bagging_fit;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::TrainedModel;
use crate::sampling::ResampleIndices;
use crate::Predict;

/// How member predictions combine into the ensemble prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Aggregation {
    /// Arithmetic mean (regression bagging).
    Mean,
    /// Plurality vote over the declared label set; ties break toward the
    /// smallest class.
    Plurality { labels: Vec<f64> },
    /// Learned mixture `sum_t theta_t f_t(x)`; classification applies the
    /// sign rule downstream.
    Weighted { theta: Vec<f64> },
    /// Boosted score `sum_t alpha_t f_t(x)`; classification applies the
    /// sign rule downstream.
    Adaboost { alphas: Vec<f64> },
    /// Second-level combiner applied to the member outputs.
    Combiner { model: TrainedModel },
}

/// Trained first-level members plus the aggregation rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    pub members: Vec<TrainedModel>,
    /// Resample that trained each member; empty when members were supplied
    /// already trained.
    pub member_indices: Vec<ResampleIndices>,
    pub aggregation: Aggregation,
}

impl EnsembleModel {
    pub fn new(
        members: Vec<TrainedModel>,
        member_indices: Vec<ResampleIndices>,
        aggregation: Aggregation,
    ) -> Result<Self> {
        let t = members.len();
        if t == 0 {
            return Err(Error::invalid_param(
                "members",
                "an ensemble needs T >= 1 members",
            ));
        }
        if !member_indices.is_empty() && member_indices.len() != t {
            return Err(Error::invalid_param(
                "member_indices",
                "must be empty or match the member count",
            ));
        }
        match &aggregation {
            Aggregation::Weighted { theta } if theta.len() != t => {
                return Err(Error::invalid_param(
                    "theta",
                    "length must equal member count",
                ));
            }
            Aggregation::Adaboost { alphas } if alphas.len() != t => {
                return Err(Error::invalid_param(
                    "alphas",
                    "length must equal member count",
                ));
            }
            Aggregation::Plurality { labels } if labels.is_empty() => {
                return Err(Error::invalid_param(
                    "labels",
                    "plurality needs a label set",
                ));
            }
            Aggregation::Combiner { model } if model.dim() != t => {
                return Err(Error::DimensionMismatch {
                    expected: t,
                    got: model.dim(),
                });
            }
            _ => {}
        }
        Ok(EnsembleModel {
            members,
            member_indices,
            aggregation,
        })
    }

    /// Number of first-level members.
    pub fn t(&self) -> usize {
        self.members.len()
    }

    fn member_predictions(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.members.iter().map(|m| m.predict(x)).collect()
    }

    /// `sum_t coeff_t * f_t(x)`, accumulated in member order. The mean rule
    /// goes through this same loop with uniform coefficients, so uniform
    /// weights reproduce the mean bit for bit.
    fn weighted_score(&self, coeffs: &[f64], x: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (member, &c) in self.members.iter().zip(coeffs) {
            total += c * member.predict(x)?;
        }
        Ok(total)
    }

    /// Serialize to the documented JSON model layout.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ensemble models serialize")
    }

    /// Load from the documented JSON model layout.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model json: {e}")))
    }
}

impl Predict for EnsembleModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        match &self.aggregation {
            Aggregation::Mean => {
                let uniform = vec![1.0 / self.t() as f64; self.t()];
                self.weighted_score(&uniform, x)
            }
            Aggregation::Weighted { theta } => self.weighted_score(theta, x),
            Aggregation::Adaboost { alphas } => self.weighted_score(alphas, x),
            Aggregation::Plurality { labels } => {
                let votes = self.member_predictions(x)?;
                Ok(crate::voting::plurality(labels, votes))
            }
            Aggregation::Combiner { model } => {
                let meta = self.member_predictions(x)?;
                model.predict(&meta)
            }
        }
    }
}

/// Prediction of an ensemble at `x` under its aggregation rule.
pub fn ensemble_predict(model: &EnsembleModel, x: &[f64]) -> Result<f64> {
    model.predict(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::TrainedModel;

    fn constant_members(values: &[f64]) -> Vec<TrainedModel> {
        values
            .iter()
            .map(|&v| TrainedModel::Constant {
                value: v,
                dim: 1,
                m: 1,
            })
            .collect()
    }

    #[test]
    fn plurality_over_votes() {
        let model = EnsembleModel::new(
            constant_members(&[1.0, 1.0, -1.0]),
            vec![],
            Aggregation::Plurality {
                labels: vec![-1.0, 1.0],
            },
        )
        .unwrap();
        assert_eq!(model.predict(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn uniform_weights_equal_mean_bit_for_bit() {
        let values = [0.1, 0.7, -0.3, 1.9, 2.2, -5.5, 0.33];
        let t = values.len();
        let mean_model =
            EnsembleModel::new(constant_members(&values), vec![], Aggregation::Mean).unwrap();
        let weighted_model = EnsembleModel::new(
            constant_members(&values),
            vec![],
            Aggregation::Weighted {
                theta: vec![1.0 / t as f64; t],
            },
        )
        .unwrap();
        let a = mean_model.predict(&[0.0]).unwrap();
        let b = weighted_model.predict(&[0.0]).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn zero_alphas_score_zero() {
        let model = EnsembleModel::new(
            constant_members(&[1.0, -1.0]),
            vec![],
            Aggregation::Adaboost {
                alphas: vec![0.0, 0.0],
            },
        )
        .unwrap();
        // Score 0: the sign(0) rule downstream counts it against either class.
        assert_eq!(model.predict(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn length_invariants_are_enforced() {
        let err = EnsembleModel::new(
            constant_members(&[1.0, 2.0]),
            vec![],
            Aggregation::Weighted { theta: vec![1.0] },
        );
        assert!(err.is_err());
        let empty = EnsembleModel::new(vec![], vec![], Aggregation::Mean);
        assert!(empty.is_err());
    }

    #[test]
    fn model_json_roundtrips() {
        let model = EnsembleModel::new(
            constant_members(&[0.5, -0.5]),
            vec![],
            Aggregation::Weighted {
                theta: vec![0.25, 0.75],
            },
        )
        .unwrap();
        let text = model.to_json();
        let back = EnsembleModel::from_json(&text).unwrap();
        assert_eq!(model, back);
    }
}
