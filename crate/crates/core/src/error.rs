//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("index {index} out of range for dataset of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error("csv row {row}, column '{column}': {reason}")]
    CsvCell {
        row: usize,
        column: String,
        reason: String,
    },

    #[error("label column '{0}' not found")]
    LabelColumnNotFound(String),

    #[error("binary task requires exactly 2 distinct labels, found {found} in column '{column}'")]
    BinaryLabelCount { column: String, found: usize },

    #[error("loss kind {loss} requires a binary task with labels in {{-1,+1}}, got label {label}")]
    LossTaskMismatch { loss: &'static str, label: f64 },

    #[error("learner does not support this task: {0}")]
    TaskUnsupported(String),

    #[error("weights: {0}")]
    BadWeights(String),

    #[error("normal equations are singular; pass a positive ridge term to regularize")]
    SingularSystem,

    #[error("training member {member}: {source}")]
    MemberTraining {
        member: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("leave-one-out fold {fold}: {source}")]
    LooFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("stability trial {trial}: {source}")]
    StabilityTrial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("adaboost: first weak learner reached weighted error >= 0.5; no usable ensemble")]
    AdaboostNoUsableMember,

    #[error("loss kind mismatch: estimate uses {estimate}, bound applies to {bound}")]
    LossKindMismatch {
        estimate: &'static str,
        bound: &'static str,
    },

    #[error("{0}")]
    Invalid(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
