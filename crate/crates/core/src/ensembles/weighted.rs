//! Weighted bagging: learn mixture weights for already-trained members.

use crate::data::{Dataset, Task};
use crate::ensembles::{Aggregation, EnsembleModel};
use crate::error::{Error, Result};
use crate::learners::{fit_logistic, TrainedModel};
use crate::linalg::{solve_spd, SymMatrix};
use crate::Predict;

/// Fit aggregation weights `theta` for `members` on `data`.
///
/// Regression: `theta` solves the `T x T` normal equations of
/// `min_theta sum_i (y_i - sum_t theta_t f_t(x_i))^2`, with `lambda_reg * I`
/// added to the Gram matrix (default 0; collinear members make the plain
/// system singular, which is reported as such). Binary classification:
/// `theta` minimizes the cross-entropy of `sigmoid(sum_t theta_t f_t(x))`
/// by gradient descent, with `lambda_reg` as an L2 penalty; this matches a
/// no-intercept logistic combiner with the same `lambda`. The prediction is
/// the raw mixture score; binary classification applies the sign rule.
pub fn weighted_bagging_fit(
    members: Vec<TrainedModel>,
    data: &Dataset,
    task: Task,
    lambda_reg: f64,
) -> Result<EnsembleModel> {
    let t = members.len();
    if t == 0 {
        return Err(Error::invalid_param("members", "need at least one member"));
    }
    if !(lambda_reg >= 0.0) {
        return Err(Error::invalid_param("lambda_reg", "must be >= 0"));
    }
    if task != data.task() {
        return Err(Error::invalid_param("task", "task must match the dataset"));
    }

    // Member predictions on the full data, one row per example.
    let mut meta = Vec::with_capacity(data.len());
    for e in data.iter() {
        let row: Vec<f64> = members
            .iter()
            .map(|m| m.predict(&e.x))
            .collect::<Result<_>>()?;
        meta.push(row);
    }

    let theta = match task {
        Task::Regression => {
            let mut gram = SymMatrix::zeros(t);
            let mut rhs = vec![0.0f64; t];
            for (row, e) in meta.iter().zip(data.iter()) {
                for r in 0..t {
                    for c in 0..t {
                        *gram.at_mut(r, c) += row[r] * row[c];
                    }
                    rhs[r] += row[r] * e.y;
                }
            }
            if lambda_reg > 0.0 {
                gram.add_diagonal(lambda_reg);
            }
            solve_spd(&gram, &rhs)?
        }
        Task::Binary => {
            let ys: Vec<f64> = data.iter().map(|e| e.y).collect();
            fit_logistic(&meta, &ys, None, lambda_reg, 0.1, 5000, 1e-8, false).weights
        }
        Task::Multiclass => {
            return Err(Error::TaskUnsupported(
                "weighted bagging is defined for regression and binary tasks".into(),
            ));
        }
    };

    EnsembleModel::new(members, vec![], Aggregation::Weighted { theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Example;
    use crate::learners::RidgeModel;
    use crate::rng::Seed;
    use crate::synth::{gen_synthetic, SyntheticSpec};

    fn linear_member(w: Vec<f64>, b: f64) -> TrainedModel {
        TrainedModel::Ridge(RidgeModel::from_parameters(w, b, 2))
    }

    #[test]
    fn single_exact_member_gets_unit_weight() {
        // Member predicts x[0]; labels equal x[0]; theta must be [1].
        let data = Dataset::new(
            vec![
                Example::new(vec![1.0], 1.0),
                Example::new(vec![2.0], 2.0),
                Example::new(vec![-3.0], -3.0),
            ],
            Task::Regression,
        )
        .unwrap();
        let member = linear_member(vec![1.0], 0.0);
        let model = weighted_bagging_fit(vec![member], &data, Task::Regression, 0.0).unwrap();
        match &model.aggregation {
            Aggregation::Weighted { theta } => {
                assert!((theta[0] - 1.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn duplicate_members_are_singular_without_regularization() {
        let data = Dataset::new(
            vec![Example::new(vec![1.0], 1.0), Example::new(vec![2.0], 2.0)],
            Task::Regression,
        )
        .unwrap();
        let m1 = linear_member(vec![1.0], 0.0);
        let m2 = linear_member(vec![1.0], 0.0);
        let err = weighted_bagging_fit(vec![m1.clone(), m2.clone()], &data, Task::Regression, 0.0);
        assert!(matches!(err, Err(Error::SingularSystem)));
        // A positive ridge term resolves it.
        let ok = weighted_bagging_fit(vec![m1, m2], &data, Task::Regression, 1e-6);
        assert!(ok.is_ok());
    }

    #[test]
    fn orthonormal_meta_features_solve_by_hand() {
        // Meta matrix [[1,0],[0,1]] with y=[2,3]: Gram = I, so theta = [2,3].
        let data = Dataset::new(
            vec![Example::new(vec![0.0], 2.0), Example::new(vec![1.0], 3.0)],
            Task::Regression,
        )
        .unwrap();
        let m1 = linear_member(vec![-1.0], 1.0); // f(0)=1, f(1)=0
        let m2 = linear_member(vec![1.0], 0.0); // f(0)=0, f(1)=1
        let model = weighted_bagging_fit(vec![m1, m2], &data, Task::Regression, 0.0).unwrap();
        match &model.aggregation {
            Aggregation::Weighted { theta } => {
                assert!((theta[0] - 2.0).abs() < 1e-12);
                assert!((theta[1] - 3.0).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn binary_fit_learns_positive_weight_for_informative_member() {
        let data = gen_synthetic(
            &SyntheticSpec::Blobs {
                m: 40,
                d: 2,
                separation: 3.0,
            },
            Seed(2),
        )
        .unwrap();
        // One informative member (axis-aligned linear score), one noise
        // member (constant 0.5).
        let good = linear_member(vec![1.0, 0.0], 0.0);
        let junk = TrainedModel::Constant {
            value: 0.5,
            dim: 2,
            m: data.len(),
        };
        let model = weighted_bagging_fit(vec![good, junk], &data, Task::Binary, 1e-3).unwrap();
        let theta = match &model.aggregation {
            Aggregation::Weighted { theta } => theta.clone(),
            _ => unreachable!(),
        };
        assert!(theta[0] > 0.2, "informative weight {}", theta[0]);
        // The fitted mixture should classify most of the sample correctly.
        let err =
            crate::risk::empirical_error(&model, &data, &crate::loss::LossKind::Classification01)
                .unwrap();
        assert!(err < 0.2, "training error {err}");
    }

    #[test]
    fn multiclass_is_rejected() {
        let data = Dataset::new(
            vec![
                Example::new(vec![0.0], 0.0),
                Example::new(vec![1.0], 1.0),
                Example::new(vec![2.0], 2.0),
            ],
            Task::Multiclass,
        )
        .unwrap();
        let member = TrainedModel::Constant {
            value: 0.0,
            dim: 1,
            m: 3,
        };
        assert!(weighted_bagging_fit(vec![member], &data, Task::Multiclass, 0.0).is_err());
    }
}
