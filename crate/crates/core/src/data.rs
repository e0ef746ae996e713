//! Datasets and single-example perturbations.
//!
//! A [`Dataset`] is an ordered, immutable list of `(x, y)` pairs plus the
//! task kind. Order is part of the contract: removal and replacement keep
//! all untouched examples in place, and every estimator that iterates a
//! dataset does so in index order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prediction task the labels encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    /// Binary classification with labels in {-1, +1}.
    Binary,
    /// Multiclass classification; labels are class indices 0..K-1.
    Multiclass,
}

/// One labeled example `z = (x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub x: Vec<f64>,
    pub y: f64,
}

impl Example {
    pub fn new(x: Vec<f64>, y: f64) -> Self {
        Example { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// An ordered training set of `m >= 1` examples sharing one feature dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    examples: Vec<Example>,
    task: Task,
    /// Declared label set for classification tasks, ascending. Empty for regression.
    labels: Vec<f64>,
}

impl Dataset {
    /// Build a dataset, checking the shared-dimension and label invariants.
    pub fn new(examples: Vec<Example>, task: Task) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::EmptyDataset(
                "dataset must contain at least one example".into(),
            ));
        }
        let d = examples[0].dim();
        if d == 0 {
            return Err(Error::invalid_param("d", "feature dimension must be >= 1"));
        }
        for (i, e) in examples.iter().enumerate() {
            if e.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: e.dim(),
                });
            }
            if !e.x.iter().all(|v| v.is_finite()) || !e.y.is_finite() {
                return Err(Error::invalid_param(
                    "examples",
                    format!("non-finite value at row {i}"),
                ));
            }
        }
        let labels = match task {
            Task::Regression => Vec::new(),
            Task::Binary => {
                for e in &examples {
                    if e.y != -1.0 && e.y != 1.0 {
                        return Err(Error::invalid_param(
                            "labels",
                            format!("binary task requires labels in {{-1,+1}}, got {}", e.y),
                        ));
                    }
                }
                vec![-1.0, 1.0]
            }
            Task::Multiclass => {
                let mut distinct: Vec<f64> = Vec::new();
                for e in &examples {
                    if e.y < 0.0 || e.y.fract() != 0.0 {
                        return Err(Error::invalid_param(
                            "labels",
                            format!("multiclass labels must be class indices, got {}", e.y),
                        ));
                    }
                    if !distinct.contains(&e.y) {
                        distinct.push(e.y);
                    }
                }
                distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
                distinct
            }
        };
        Ok(Dataset {
            examples,
            task,
            labels,
        })
    }

    /// As [`Dataset::new`] but with an explicitly declared label set
    /// (a resample may not contain every class).
    pub fn with_labels(examples: Vec<Example>, task: Task, labels: Vec<f64>) -> Result<Self> {
        let mut ds = Dataset::new(examples, task)?;
        if task == Task::Multiclass {
            ds.labels = labels;
        }
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.examples[0].dim()
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn example(&self, i: usize) -> &Example {
        &self.examples[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Example> {
        self.examples.iter()
    }

    /// Dataset containing `self.examples[indices[..]]` in the given order.
    pub fn reindex(&self, indices: &[usize]) -> Result<Dataset> {
        let mut examples = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            examples.push(self.examples[i].clone());
        }
        Dataset::with_labels(examples, self.task, self.labels.clone())
    }
}

/// `D^{\i}`: drop the i-th example, keeping the order of the rest.
///
/// Removing the only example is an error: downstream training on an empty
/// set is forbidden, so the perturbation refuses to produce one.
pub fn remove_example(data: &Dataset, i: usize) -> Result<Dataset> {
    if i >= data.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: data.len(),
        });
    }
    if data.len() == 1 {
        return Err(Error::EmptyDataset(
            "removing the only example would leave an empty training set".into(),
        ));
    }
    let mut examples = data.examples.clone();
    examples.remove(i);
    Dataset::with_labels(examples, data.task, data.labels.clone())
}

/// `D^{\i} ∪ {z}`: replace the i-th example with `z`, in place.
pub fn replace_example(data: &Dataset, i: usize, z: Example) -> Result<Dataset> {
    if i >= data.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: data.len(),
        });
    }
    if z.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: z.dim(),
        });
    }
    let mut examples = data.examples.clone();
    examples[i] = z;
    Dataset::with_labels(examples, data.task, data.labels.clone())
}
