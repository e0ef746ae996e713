//! Ensemble methods with algorithmic-stability tooling.
//!
//! The crate has three layers:
//!
//! * data and learning: [`data`], [`synth`], [`csv_io`], [`sampling`],
//!   [`loss`], [`risk`], [`learners`], [`ensembles`] — datasets, the four
//!   base algorithms, and the ensemble constructions (bagging, subbagging,
//!   AdaBoost.M1, stacking, bag-/dag-stacking, weighted bagging);
//! * stability: [`stability`] estimates hypothesis and pointwise hypothesis
//!   stability by Monte-Carlo perturbation, [`bounds`] evaluates the
//!   closed-form stability and generalization bounds;
//! * plumbing: [`rng`] provides pure substream derivation so every
//!   randomized computation is reproducible and order-independent, and
//!   [`recipe`] wraps learners and ensemble pipelines behind one trainable
//!   surface.
//!
//! Determinism contract: everything randomized is a pure function of its
//! inputs and a [`rng::Seed`]; reductions run in fixed index order, so
//! results are bit-identical across runs and thread counts.

pub mod bounds;
pub mod csv_io;
pub mod data;
pub mod ensembles;
pub mod error;
pub mod learners;
pub mod linalg;
pub mod loss;
pub mod recipe;
pub mod risk;
pub mod rng;
pub mod sampling;
pub mod stability;
pub mod synth;
pub mod voting;

pub use bounds::BoundResult;
pub use data::{remove_example, replace_example, Dataset, Example, Task};
pub use ensembles::{EnsembleModel, StackingRecipe};
pub use error::{Error, Result};
pub use learners::{LearnerSpec, StabilityDescriptor, TrainedModel};
pub use loss::LossKind;
pub use recipe::{AnyModel, RecipeSpec};
pub use risk::MeanWithError;
pub use rng::Seed;
pub use sampling::ResampleIndices;
pub use stability::StabilityEstimate;
pub use synth::SyntheticSpec;

/// A fitted predictor: a pure function from a feature vector to a real
/// prediction (a value for regression, a score or class label for
/// classification).
pub trait Predict {
    fn predict(&self, x: &[f64]) -> Result<f64>;
}

/// A trainable recipe. Training must be a pure function of `(data, seed)`;
/// any internal randomness (resampling, index draws) is derived from `seed`.
pub trait Trainer {
    type Model: Predict;

    fn train(&self, data: &data::Dataset, seed: rng::Seed) -> Result<Self::Model>;
}
