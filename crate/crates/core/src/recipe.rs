//! Trainable recipes: a single learner or a whole ensemble pipeline behind
//! one `train(data, seed) -> model` surface, so error estimators and
//! stability estimators can treat them uniformly.

use serde::{Deserialize, Serialize};

use crate::bounds::{
    bag_stacking_bound, bagging_stability_bound, dag_stacking_bound, stacking_bound,
    subbagging_stability_bound, BagQMode, BoundResult, BoundTask, DagQMode, OccupancyMode,
};
use crate::data::Dataset;
use crate::ensembles::{
    adaboost_train, bagging_train, stacked_sampling_train, stacking_train, subbagging_train,
    EnsembleModel, SamplingMode, StackingRecipe,
};
use crate::error::Result;
use crate::learners::{theoretical_stability, train, LearnerSpec, TrainedModel};
use crate::loss::LossKind;
use crate::rng::Seed;
use crate::{Predict, Trainer};

/// Anything the harness can train: a bare learner, an ensemble pipeline, or
/// a diagnostic predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RecipeSpec {
    Learner {
        spec: LearnerSpec,
    },
    Bagging {
        base: LearnerSpec,
        t: usize,
    },
    Subbagging {
        base: LearnerSpec,
        t: usize,
        p: usize,
    },
    Adaboost {
        weak: LearnerSpec,
        t: usize,
    },
    Stacking {
        recipe: StackingRecipe,
    },
    /// Diagnostic: predicts `value` regardless of data or input.
    Constant {
        value: f64,
    },
    /// Diagnostic: predicts the training-label mean regardless of input.
    TrainingMean,
}

/// A trained recipe: either a single model or an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyModel {
    Single(TrainedModel),
    Ensemble(EnsembleModel),
}

impl Predict for AnyModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        match self {
            AnyModel::Single(m) => m.predict(x),
            AnyModel::Ensemble(m) => m.predict(x),
        }
    }
}

impl Trainer for RecipeSpec {
    type Model = AnyModel;

    fn train(&self, data: &Dataset, seed: Seed) -> Result<AnyModel> {
        match self {
            RecipeSpec::Learner { spec } => Ok(AnyModel::Single(train(spec, data, None)?)),
            RecipeSpec::Bagging { base, t } => {
                Ok(AnyModel::Ensemble(bagging_train(base, data, *t, seed)?))
            }
            RecipeSpec::Subbagging { base, t, p } => Ok(AnyModel::Ensemble(subbagging_train(
                base, data, *t, *p, seed,
            )?)),
            RecipeSpec::Adaboost { weak, t } => {
                Ok(AnyModel::Ensemble(adaboost_train(weak, data, *t)?))
            }
            RecipeSpec::Stacking { recipe } => {
                let model = if recipe.sampling == SamplingMode::None {
                    stacking_train(recipe, data, seed)?
                } else {
                    stacked_sampling_train(recipe, data, seed)?
                };
                Ok(AnyModel::Ensemble(model))
            }
            RecipeSpec::Constant { value } => Ok(AnyModel::Single(TrainedModel::Constant {
                value: *value,
                dim: data.dim(),
                m: data.len(),
            })),
            RecipeSpec::TrainingMean => {
                let mean = data.iter().map(|e| e.y).sum::<f64>() / data.len() as f64;
                Ok(AnyModel::Single(TrainedModel::TrainingMean {
                    value: mean,
                    dim: data.dim(),
                    m: data.len(),
                }))
            }
        }
    }
}

impl Trainer for LearnerSpec {
    type Model = TrainedModel;

    fn train(&self, data: &Dataset, _seed: Seed) -> Result<TrainedModel> {
        train(self, data, None)
    }
}

/// Knobs for composing theoretical bounds: the Lipschitz constant for
/// regression-task variants and the inclusion-probability conventions for
/// the sampled stacking bounds.
#[derive(Debug, Clone, Copy)]
pub struct BoundContext {
    pub b_lipschitz: f64,
    pub bag_q_mode: BagQMode,
    pub dag_q_mode: DagQMode,
}

impl Default for BoundContext {
    fn default() -> Self {
        BoundContext {
            b_lipschitz: 1.0,
            bag_q_mode: BagQMode::default(),
            dag_q_mode: DagQMode::default(),
        }
    }
}

impl BoundContext {
    pub fn with_b(b_lipschitz: f64) -> Self {
        BoundContext {
            b_lipschitz,
            ..Default::default()
        }
    }
}

impl RecipeSpec {
    pub fn learner(spec: LearnerSpec) -> Self {
        RecipeSpec::Learner { spec }
    }

    /// Compose the closed-form stability bound the quoted constants give
    /// this recipe at training size `m`, when every piece is known.
    ///
    /// `ctx.b_lipschitz` supplies the Lipschitz constant for the
    /// regression-task variants; classification variants carry the constant
    /// 2 instead.
    pub fn theoretical_bound(
        &self,
        m: usize,
        kind: &LossKind,
        ctx: &BoundContext,
    ) -> Result<Option<BoundResult>> {
        let b_lipschitz = ctx.b_lipschitz;
        let task = match kind {
            LossKind::Squared => BoundTask::Regression,
            LossKind::Classification01 | LossKind::Gamma { .. } => BoundTask::Classification,
        };
        let learner_beta = |spec: &LearnerSpec, size: usize| -> Option<f64> {
            theoretical_stability(spec, size, kind).value
        };
        let result = match self {
            RecipeSpec::Learner { spec } => learner_beta(spec, m).map(|beta| {
                let descriptor = theoretical_stability(spec, m, kind);
                BoundResult {
                    value: beta,
                    formula: format!("learner_{}", descriptor.formula),
                    inputs: [
                        ("m".to_string(), serde_json::json!(m)),
                        ("algorithm".to_string(), serde_json::json!(spec.name())),
                    ]
                    .into_iter()
                    .collect(),
                    notes: vec![descriptor.note.to_string()],
                }
            }),
            RecipeSpec::Bagging { base, .. } => match base {
                LearnerSpec::Knn { k } => {
                    let kf = *k as f64;
                    Some(bagging_stability_bound(
                        &|size| kf / size,
                        m,
                        b_lipschitz,
                        task,
                        OccupancyMode::Auto,
                    )?)
                }
                LearnerSpec::Ridge { lambda, .. } => {
                    let l = *lambda;
                    Some(bagging_stability_bound(
                        &|size| 1.0 / (l * size),
                        m,
                        b_lipschitz,
                        task,
                        OccupancyMode::Auto,
                    )?)
                }
                _ => None,
            },
            RecipeSpec::Subbagging { base, p, .. } => match learner_beta(base, *p) {
                Some(gamma_p) => Some(subbagging_stability_bound(
                    gamma_p,
                    *p,
                    m,
                    b_lipschitz,
                    task,
                )?),
                None => None,
            },
            RecipeSpec::Stacking { recipe } => {
                let combiner = learner_beta(&recipe.combiner_spec, m);
                // Base constants are evaluated at m for the sampled modes
                // too: the inclusion-tail factor alone carries the effect
                // of training on replicates.
                let bases: Option<Vec<f64>> =
                    recipe.base_specs.iter().map(|s| learner_beta(s, m)).collect();
                match (combiner, bases) {
                    (Some(cb), Some(bb)) => Some(match recipe.sampling {
                        SamplingMode::None => stacking_bound(cb, &bb)?,
                        SamplingMode::Bootstrap => {
                            bag_stacking_bound(recipe.t(), m, cb, &bb, ctx.bag_q_mode)?
                        }
                        SamplingMode::Subsample { p } => {
                            dag_stacking_bound(recipe.t(), p, m, cb, &bb, ctx.dag_q_mode)?
                        }
                    }),
                    _ => None,
                }
            }
            RecipeSpec::Adaboost { .. }
            | RecipeSpec::Constant { .. }
            | RecipeSpec::TrainingMean => None,
        };
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_synthetic, SyntheticSpec};

    #[test]
    fn recipes_train_and_predict() {
        let data = gen_synthetic(
            &SyntheticSpec::Blobs {
                m: 20,
                d: 2,
                separation: 2.5,
            },
            Seed(1),
        )
        .unwrap();
        let recipes = [
            RecipeSpec::learner(LearnerSpec::knn(3)),
            RecipeSpec::Bagging {
                base: LearnerSpec::knn(1),
                t: 5,
            },
            RecipeSpec::Subbagging {
                base: LearnerSpec::knn(1),
                t: 5,
                p: 10,
            },
            RecipeSpec::Adaboost {
                weak: LearnerSpec::Stump,
                t: 5,
            },
            RecipeSpec::Stacking {
                recipe: StackingRecipe::new(
                    vec![LearnerSpec::knn(1), LearnerSpec::knn(3)],
                    LearnerSpec::logistic(0.5),
                ),
            },
            RecipeSpec::Constant { value: 1.0 },
            RecipeSpec::TrainingMean,
        ];
        for recipe in recipes {
            let model = recipe.train(&data, Seed(2)).unwrap();
            assert!(
                model.predict(&[0.0, 0.0]).unwrap().is_finite(),
                "{recipe:?}"
            );
        }
    }

    #[test]
    fn stacking_recipe_composes_product_bound() {
        let recipe = RecipeSpec::Stacking {
            recipe: StackingRecipe::new(
                vec![
                    LearnerSpec::knn(1),
                    LearnerSpec::knn(2),
                    LearnerSpec::knn(3),
                ],
                LearnerSpec::ridge(2.0),
            ),
        };
        let bound = recipe
            .theoretical_bound(10, &LossKind::Classification01, &BoundContext::with_b(1.0))
            .unwrap()
            .unwrap();
        assert!((bound.value - 3.0e-4).abs() < 1e-15 + 1e-12 * 3.0e-4);
    }

    #[test]
    fn stump_pieces_make_bounds_unknown() {
        let recipe = RecipeSpec::Stacking {
            recipe: StackingRecipe::new(
                vec![LearnerSpec::Stump, LearnerSpec::knn(1)],
                LearnerSpec::ridge(1.0),
            ),
        };
        assert!(recipe
            .theoretical_bound(10, &LossKind::Classification01, &BoundContext::with_b(1.0))
            .unwrap()
            .is_none());
        let ada = RecipeSpec::Adaboost {
            weak: LearnerSpec::Stump,
            t: 3,
        };
        assert!(ada
            .theoretical_bound(10, &LossKind::Classification01, &BoundContext::with_b(1.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn subbagging_recipe_uses_gamma_at_p() {
        let recipe = RecipeSpec::Subbagging {
            base: LearnerSpec::knn(1),
            t: 25,
            p: 10,
        };
        let bound = recipe
            .theoretical_bound(100, &LossKind::Classification01, &BoundContext::with_b(1.0))
            .unwrap()
            .unwrap();
        // 2 * (1/10) * 10/100 = 0.02.
        assert!((bound.value - 0.02).abs() < 1e-15);
    }
}
