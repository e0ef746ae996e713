//! Ridge regression via the normal equations.
//!
//! The solve is `(X^T X + lambda * W * I) w = X^T y` where `X` is the design
//! matrix (with a trailing ones column when the intercept is enabled, which
//! is then penalized like every other coefficient) and `W` is the weight sum
//! (`m` for unweighted fits). Scaling the penalty by `m` makes the learner's
//! stability descriptor `1/(lambda m)`.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::linalg::{solve_spd, SymMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    weights: Vec<f64>,
    intercept: f64,
    lambda: f64,
    m: usize,
}

pub(super) fn fit(
    lambda: f64,
    intercept: bool,
    data: &Dataset,
    weights: Option<&[f64]>,
) -> RidgeModel {
    let d = data.dim();
    let n = if intercept { d + 1 } else { d };
    let mut gram = SymMatrix::zeros(n);
    let mut rhs = vec![0.0f64; n];

    let mut row = vec![0.0f64; n];
    for (i, e) in data.iter().enumerate() {
        row[..d].copy_from_slice(&e.x);
        if intercept {
            row[d] = 1.0;
        }
        let w = weights.map_or(1.0, |ws| ws[i]);
        if weights.is_none() {
            for r in 0..n {
                for c in 0..n {
                    *gram.at_mut(r, c) += row[r] * row[c];
                }
                rhs[r] += row[r] * e.y;
            }
        } else {
            for r in 0..n {
                for c in 0..n {
                    *gram.at_mut(r, c) += w * row[r] * row[c];
                }
                rhs[r] += w * row[r] * e.y;
            }
        }
    }
    let total_weight = weights.map_or(data.len() as f64, |ws| ws.iter().sum());
    gram.add_diagonal(lambda * total_weight);

    // lambda > 0 makes the system positive definite.
    let solution = solve_spd(&gram, &rhs)
        .expect("ridge normal equations are positive definite for lambda > 0");
    let (w, b) = if intercept {
        (solution[..d].to_vec(), solution[d])
    } else {
        (solution, 0.0)
    };
    RidgeModel {
        weights: w,
        intercept: b,
        lambda,
        m: data.len(),
    }
}

impl RidgeModel {
    /// Assemble a linear model from explicit parameters (model loading and
    /// hand-built fixtures).
    pub fn from_parameters(weights: Vec<f64>, intercept: f64, m: usize) -> Self {
        RidgeModel {
            weights,
            intercept,
            lambda: 0.0,
            m,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn training_size(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }
}
