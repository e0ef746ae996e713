//! AdaBoost.M1 for binary tasks.

use crate::data::{Dataset, Task};
use crate::ensembles::{Aggregation, EnsembleModel};
use crate::error::{Error, Result};
use crate::learners::{train, LearnerSpec};
use crate::Predict;

/// Weight given to a member that reaches zero weighted error; `log` of the
/// error ratio blows up there, so the round stops with this finite constant.
const PERFECT_ROUND_ALPHA_ARG: f64 = 1e12;

/// AdaBoost.M1: importances start uniform at `1/m`; each round fits the weak
/// learner on the current importances, computes the weighted error
/// `err_t = sum_i w_i I(y_i != f_t(x_i)) / sum_i w_i`, sets
/// `alpha_t = log((1 - err_t)/err_t)`, and multiplies the importances of
/// misclassified examples by `exp(alpha_t)`.
///
/// Degenerate rounds: `err_t = 0` stops after adding the member with
/// `alpha = log(1e12)`; `err_t >= 0.5` stops before adding the member, and
/// if that happens on the first round there is no usable ensemble.
/// The ensemble scores by `sum_t alpha_t f_t(x)`; classification applies
/// the sign rule downstream.
pub fn adaboost_train(weak_spec: &LearnerSpec, data: &Dataset, t: usize) -> Result<EnsembleModel> {
    if t == 0 {
        return Err(Error::invalid_param("t", "adaboost requires T >= 1"));
    }
    if data.task() != Task::Binary {
        return Err(Error::TaskUnsupported(
            "adaboost requires a binary task".into(),
        ));
    }

    let m = data.len();
    let mut importances = vec![1.0 / m as f64; m];
    let mut members = Vec::new();
    let mut alphas = Vec::new();

    for round in 0..t {
        let wrap = |e: Error| Error::MemberTraining {
            member: round,
            source: Box::new(e),
        };
        let weak = train(weak_spec, data, Some(&importances)).map_err(wrap)?;

        let mut missed = vec![false; m];
        for (i, e) in data.iter().enumerate() {
            let pred = weak.predict(&e.x).map_err(wrap)?;
            missed[i] = pred * e.y <= 0.0;
        }
        let weight_sum: f64 = importances.iter().sum();
        let err: f64 = importances
            .iter()
            .zip(&missed)
            .filter(|(_, &miss)| miss)
            .map(|(w, _)| w)
            .sum::<f64>()
            / weight_sum;

        if err == 0.0 {
            members.push(weak);
            alphas.push(PERFECT_ROUND_ALPHA_ARG.ln());
            break;
        }
        if err >= 0.5 {
            break;
        }

        let alpha = ((1.0 - err) / err).ln();
        members.push(weak);
        alphas.push(alpha);
        let boost = alpha.exp();
        for (w, &miss) in importances.iter_mut().zip(&missed) {
            if miss {
                *w *= boost;
            }
        }
    }

    if members.is_empty() {
        return Err(Error::AdaboostNoUsableMember);
    }
    EnsembleModel::new(members, vec![], Aggregation::Adaboost { alphas })
}

/// `alpha = log((1 - err)/err)`, exposed for bound checks and reports.
pub fn adaboost_alpha(err: f64) -> f64 {
    ((1.0 - err) / err).ln()
}
