//! Binary logistic regression by full-batch gradient descent.
//!
//! Minimizes the weighted mean of `log(1 + exp(-y s))` over scores
//! `s = <w, x> + b` plus an L2 penalty `(lambda / 2) ||w||^2` (the intercept
//! is not penalized). Each iteration starts from the nominal step and halves
//! it until the objective does not increase, so accepted steps are monotone;
//! descent stops when the gradient norm falls below `tol` or after
//! `max_iters` iterations, in which case the model is flagged unconverged.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    weights: Vec<f64>,
    intercept: f64,
    m: usize,
    pub converged: bool,
    pub iterations: usize,
}

/// Raw fit output shared with the weighted-bagging cross-entropy solve.
#[derive(Debug, Clone)]
pub struct LogisticFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[inline]
fn log1p_exp(t: f64) -> f64 {
    // log(1 + e^t), stable for both signs.
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

#[inline]
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

struct Objective<'a> {
    xs: &'a [Vec<f64>],
    ys: &'a [f64],
    weights: &'a [f64],
    weight_sum: f64,
    lambda: f64,
    intercept: bool,
}

impl Objective<'_> {
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let mut total = 0.0;
        for ((x, &y), &wt) in self.xs.iter().zip(self.ys).zip(self.weights) {
            let s: f64 = w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b;
            total += wt * log1p_exp(-y * s);
        }
        let penalty = 0.5 * self.lambda * w.iter().map(|v| v * v).sum::<f64>();
        total / self.weight_sum + penalty
    }

    fn gradient(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let d = w.len();
        let mut gw = vec![0.0f64; d];
        let mut gb = 0.0f64;
        for ((x, &y), &wt) in self.xs.iter().zip(self.ys).zip(self.weights) {
            let s: f64 = w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b;
            let coeff = wt * (-y) * sigmoid(-y * s);
            for (g, &xv) in gw.iter_mut().zip(x) {
                *g += coeff * xv;
            }
            gb += coeff;
        }
        for (g, &wv) in gw.iter_mut().zip(w) {
            *g = *g / self.weight_sum + self.lambda * wv;
        }
        gb /= self.weight_sum;
        if !self.intercept {
            gb = 0.0;
        }
        (gw, gb)
    }
}

/// Gradient-descent fit on raw feature rows. `lambda >= 0` here; the
/// `LearnerSpec` invariant `lambda > 0` is enforced one level up.
#[allow(clippy::too_many_arguments)]
pub fn fit_logistic(
    xs: &[Vec<f64>],
    ys: &[f64],
    example_weights: Option<&[f64]>,
    lambda: f64,
    step: f64,
    max_iters: usize,
    tol: f64,
    intercept: bool,
) -> LogisticFit {
    let m = xs.len();
    let d = xs[0].len();
    let uniform = vec![1.0f64; m];
    let weights = example_weights.unwrap_or(&uniform);
    let weight_sum: f64 = weights.iter().sum();
    let obj = Objective {
        xs,
        ys,
        weights,
        weight_sum,
        lambda,
        intercept,
    };

    let mut w = vec![0.0f64; d];
    let mut b = 0.0f64;
    let mut current = obj.loss(&w, b);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..max_iters {
        iterations = iter + 1;
        let (gw, gb) = obj.gradient(&w, b);
        let gnorm = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        if gnorm.sqrt() <= tol {
            converged = true;
            iterations = iter;
            break;
        }
        // Backtrack from the nominal step until the objective is monotone.
        let mut eta = step;
        let mut accepted = false;
        for _ in 0..40 {
            let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - eta * g).collect();
            let cand_b = b - eta * gb;
            let cand = obj.loss(&cand_w, cand_b);
            if cand <= current {
                w = cand_w;
                b = cand_b;
                current = cand;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // No step length makes progress: numerically at a minimum.
            converged = true;
            break;
        }
    }

    LogisticFit {
        weights: w,
        intercept: b,
        converged,
        iterations,
    }
}

pub(super) fn fit(
    lambda: f64,
    step: f64,
    max_iters: usize,
    tol: f64,
    intercept: bool,
    data: &Dataset,
    weights: Option<&[f64]>,
) -> LogisticModel {
    let xs: Vec<Vec<f64>> = data.iter().map(|e| e.x.clone()).collect();
    let ys: Vec<f64> = data.iter().map(|e| e.y).collect();
    let fit = fit_logistic(&xs, &ys, weights, lambda, step, max_iters, tol, intercept);
    LogisticModel {
        weights: fit.weights,
        intercept: fit.intercept,
        m: data.len(),
        converged: fit.converged,
        iterations: fit.iterations,
    }
}

impl LogisticModel {
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

    /// Log-odds score `<w, x> + b`.
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Example, Task};

    fn separable() -> Dataset {
        Dataset::new(
            vec![
                Example::new(vec![-2.0], -1.0),
                Example::new(vec![-1.0], -1.0),
                Example::new(vec![1.0], 1.0),
                Example::new(vec![2.0], 1.0),
            ],
            Task::Binary,
        )
        .unwrap()
    }

    #[test]
    fn separates_a_line() {
        let m = fit(0.01, 0.5, 5000, 1e-8, true, &separable(), None);
        for e in separable().iter() {
            assert!(m.predict(&e.x) * e.y > 0.0);
        }
    }

    #[test]
    fn objective_decreases_along_iterates() {
        let data = separable();
        let xs: Vec<Vec<f64>> = data.iter().map(|e| e.x.clone()).collect();
        let ys: Vec<f64> = data.iter().map(|e| e.y).collect();
        let uniform = vec![1.0; 4];
        let obj = Objective {
            xs: &xs,
            ys: &ys,
            weights: &uniform,
            weight_sum: 4.0,
            lambda: 0.1,
            intercept: true,
        };
        // Replay a few accepted steps by hand and check monotonicity.
        let mut w = vec![0.0];
        let mut b = 0.0;
        let mut last = obj.loss(&w, b);
        for _ in 0..50 {
            let (gw, gb) = obj.gradient(&w, b);
            let mut eta = 0.5;
            loop {
                let cw: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - eta * g).collect();
                let cb = b - eta * gb;
                let cand = obj.loss(&cw, cb);
                if cand <= last {
                    w = cw;
                    b = cb;
                    assert!(cand <= last);
                    last = cand;
                    break;
                }
                eta *= 0.5;
                assert!(eta > 1e-12);
            }
        }
    }

    #[test]
    fn weighted_examples_shift_the_boundary() {
        // Up-weighting the positive class pushes the intercept up.
        let data = separable();
        let unweighted = fit(0.01, 0.5, 4000, 1e-10, true, &data, None);
        let weighted = fit(
            0.01,
            0.5,
            4000,
            1e-10,
            true,
            &data,
            Some(&[1.0, 1.0, 5.0, 5.0]),
        );
        assert!(weighted.intercept() > unweighted.intercept());
    }

    #[test]
    fn no_intercept_mode_keeps_zero() {
        let m = fit(0.1, 0.3, 2000, 1e-9, false, &separable(), None);
        assert_eq!(m.intercept(), 0.0);
    }
}
