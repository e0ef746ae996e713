//! Stacking, bag-stacking, and dag-stacking.
//!
//! Meta-features are resubstitution predictions: every base model predicts
//! the full original training inputs, and the combiner trains on that
//! `m x T` meta-dataset with the original labels. Score-valued base
//! classifiers feed their raw scores to the combiner rather than hard
//! labels, which is more informative than restricting outcomes to the label
//! set. An optional out-of-fold mode (common practice, off by default)
//! replaces resubstitution meta-features with K-fold held-out predictions.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Example};
use crate::ensembles::{Aggregation, EnsembleModel};
use crate::error::{Error, Result};
use crate::learners::{train, LearnerSpec, TrainedModel};
use crate::rng::Seed;
use crate::sampling::{bootstrap_sample, subsample, ResampleIndices};
use crate::Predict;

fn default_folds() -> usize {
    5
}

/// How first-level training sets are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Classical stacking: every base model trains on the full data.
    None,
    /// Bag-stacking: one bootstrap replicate per base model.
    Bootstrap,
    /// Dag-stacking: one size-p subsample (without replacement) per base
    /// model; replicates are drawn independently of each other.
    Subsample { p: usize },
}

/// A stacking blueprint: base specs, combiner spec, and sampling mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackingRecipe {
    pub base_specs: Vec<LearnerSpec>,
    pub combiner_spec: LearnerSpec,
    #[serde(default = "SamplingMode::none")]
    pub sampling: SamplingMode,
    /// Use K-fold out-of-fold meta-features instead of resubstitution.
    /// Only valid with `SamplingMode::None`.
    #[serde(default)]
    pub out_of_fold: bool,
    #[serde(default = "default_folds")]
    pub folds: usize,
}

impl SamplingMode {
    fn none() -> Self {
        SamplingMode::None
    }
}

impl StackingRecipe {
    pub fn new(base_specs: Vec<LearnerSpec>, combiner_spec: LearnerSpec) -> Self {
        StackingRecipe {
            base_specs,
            combiner_spec,
            sampling: SamplingMode::None,
            out_of_fold: false,
            folds: default_folds(),
        }
    }

    pub fn with_sampling(mut self, sampling: SamplingMode) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn t(&self) -> usize {
        self.base_specs.len()
    }

    fn validate(&self, data: &Dataset) -> Result<()> {
        if self.base_specs.is_empty() {
            return Err(Error::invalid_param(
                "base_specs",
                "stacking requires T >= 1",
            ));
        }
        for spec in &self.base_specs {
            spec.validate()?;
        }
        self.combiner_spec.validate()?;
        if let SamplingMode::Subsample { p } = self.sampling {
            if p == 0 || p > data.len() {
                return Err(Error::invalid_param(
                    "p",
                    format!(
                        "subsample size must satisfy 1 <= p <= m, got p={p}, m={}",
                        data.len()
                    ),
                ));
            }
        }
        if self.out_of_fold {
            if self.sampling != SamplingMode::None {
                return Err(Error::invalid_param(
                    "out_of_fold",
                    "out-of-fold meta-features are only defined for classical stacking",
                ));
            }
            if self.folds < 2 || self.folds > data.len() {
                return Err(Error::invalid_param("folds", "need 2 <= folds <= m"));
            }
        }
        Ok(())
    }
}

/// Classical stacking: `sampling` must be `None`.
pub fn stacking_train(
    recipe: &StackingRecipe,
    data: &Dataset,
    seed: Seed,
) -> Result<EnsembleModel> {
    if recipe.sampling != SamplingMode::None {
        return Err(Error::invalid_param(
            "sampling",
            "stacking_train is for sampling = none; use stacked_sampling_train",
        ));
    }
    train_stacked(recipe, data, seed)
}

/// Bag-stacking / dag-stacking: base model `t` trains on replicate `t`,
/// then predicts the full original data to produce its meta-feature column.
pub fn stacked_sampling_train(
    recipe: &StackingRecipe,
    data: &Dataset,
    seed: Seed,
) -> Result<EnsembleModel> {
    if recipe.sampling == SamplingMode::None {
        return Err(Error::invalid_param(
            "sampling",
            "stacked_sampling_train requires bootstrap or subsample sampling",
        ));
    }
    train_stacked(recipe, data, seed)
}

fn train_stacked(recipe: &StackingRecipe, data: &Dataset, seed: Seed) -> Result<EnsembleModel> {
    recipe.validate(data)?;
    let t = recipe.t();

    let mut members: Vec<TrainedModel> = Vec::with_capacity(t);
    let mut member_indices: Vec<ResampleIndices> = Vec::new();
    for (i, spec) in recipe.base_specs.iter().enumerate() {
        let wrap = |e: Error| Error::MemberTraining {
            member: i,
            source: Box::new(e),
        };
        let member = match recipe.sampling {
            SamplingMode::None => train(spec, data, None).map_err(wrap)?,
            SamplingMode::Bootstrap => {
                let (replicate, idx) =
                    bootstrap_sample(data, seed.derive("member", i as u64)).map_err(wrap)?;
                member_indices.push(idx);
                train(spec, &replicate, None).map_err(wrap)?
            }
            SamplingMode::Subsample { p } => {
                let (replicate, idx) =
                    subsample(data, p, seed.derive("member", i as u64)).map_err(wrap)?;
                member_indices.push(idx);
                train(spec, &replicate, None).map_err(wrap)?
            }
        };
        members.push(member);
    }

    let meta = if recipe.out_of_fold {
        out_of_fold_meta(recipe, data)?
    } else {
        resubstitution_meta(&members, data)?
    };
    let combiner = train(&recipe.combiner_spec, &meta, None)?;

    EnsembleModel::new(
        members,
        member_indices,
        Aggregation::Combiner { model: combiner },
    )
}

/// Meta-dataset `D~`: features are the T member predictions at each training
/// input, labels are the original labels.
fn resubstitution_meta(members: &[TrainedModel], data: &Dataset) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(data.len());
    for e in data.iter() {
        let features: Vec<f64> = members
            .iter()
            .map(|m| m.predict(&e.x))
            .collect::<Result<_>>()?;
        rows.push(Example::new(features, e.y));
    }
    Dataset::with_labels(rows, data.task(), data.labels().to_vec())
}

fn out_of_fold_meta(recipe: &StackingRecipe, data: &Dataset) -> Result<Dataset> {
    let m = data.len();
    let k = recipe.folds;
    let t = recipe.t();
    let mut features = vec![vec![0.0f64; t]; m];
    for fold in 0..k {
        let in_fold: Vec<usize> = (0..m).filter(|i| i % k == fold).collect();
        let out_fold: Vec<usize> = (0..m).filter(|i| i % k != fold).collect();
        if in_fold.is_empty() || out_fold.is_empty() {
            return Err(Error::invalid_param("folds", "a fold would be empty"));
        }
        let train_part = data.reindex(&out_fold)?;
        for (col, spec) in recipe.base_specs.iter().enumerate() {
            let model = train(spec, &train_part, None)?;
            for &i in &in_fold {
                features[i][col] = model.predict(&data.example(i).x)?;
            }
        }
    }
    let rows = features
        .into_iter()
        .zip(data.iter())
        .map(|(f, e)| Example::new(f, e.y))
        .collect();
    Dataset::with_labels(rows, data.task(), data.labels().to_vec())
}

/// The meta-dataset a set of trained members induces on `data`.
pub fn meta_dataset(members: &[TrainedModel], data: &Dataset) -> Result<Dataset> {
    resubstitution_meta(members, data)
}
