//! Decision stump for binary tasks.
//!
//! Candidate thresholds are the midpoints between consecutive distinct
//! sorted feature values plus -inf/+inf sentinels, so the scanned set is
//! finite and complete. Ties in weighted error keep the first candidate in
//! scan order (feature ascending, threshold ascending, polarity +1 first).

use serde::{Deserialize, Serialize};

use crate::data::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StumpModel {
    feature: usize,
    threshold: f64,
    /// Predicted label when `x[feature] > threshold`; the opposite below.
    polarity: f64,
    dim: usize,
    m: usize,
    weighted_error: f64,
}

pub(super) fn fit(data: &Dataset, weights: Option<&[f64]>) -> StumpModel {
    let m = data.len();
    let d = data.dim();
    let uniform = vec![1.0f64; m];
    let w = weights.unwrap_or(&uniform);
    let w_sum: f64 = w.iter().sum();

    let mut best = StumpModel {
        feature: 0,
        threshold: f64::NEG_INFINITY,
        polarity: 1.0,
        dim: d,
        m,
        weighted_error: f64::INFINITY,
    };

    for feature in 0..d {
        let mut values: Vec<f64> = data.iter().map(|e| e.x[feature]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        let mut thresholds = Vec::with_capacity(values.len() + 1);
        thresholds.push(f64::NEG_INFINITY);
        for pair in values.windows(2) {
            thresholds.push(0.5 * (pair[0] + pair[1]));
        }
        thresholds.push(f64::INFINITY);

        for &threshold in &thresholds {
            for polarity in [1.0, -1.0] {
                let mut err = 0.0;
                for (e, &wi) in data.iter().zip(w) {
                    let pred = if e.x[feature] > threshold {
                        polarity
                    } else {
                        -polarity
                    };
                    if pred != e.y {
                        err += wi;
                    }
                }
                let err = err / w_sum;
                if err < best.weighted_error {
                    best = StumpModel {
                        feature,
                        threshold,
                        polarity,
                        dim: d,
                        m,
                        weighted_error: err,
                    };
                }
            }
        }
    }
    best
}

impl StumpModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn training_size(&self) -> usize {
        self.m
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn feature(&self) -> usize {
        self.feature
    }

    pub fn training_weighted_error(&self) -> f64 {
        self.weighted_error
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        if x[self.feature] > self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}
