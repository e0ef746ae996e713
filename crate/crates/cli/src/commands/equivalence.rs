//! `equivalence`: the bag-stacking / weighted-bagging identity check.

use serde::Serialize;

use stackstab::ensembles::{check_weighted_bagging_equivalence, EquivalenceOutcome};
use stackstab::learners::LearnerSpec;
use stackstab::{Seed, Task};

use crate::config::EquivalenceConfig;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct EquivalenceResults {
    pub lambda_reg: f64,
    pub t: usize,
    pub m: usize,
    pub outcome: EquivalenceOutcome,
}

pub fn run(cfg: &EquivalenceConfig) -> Result<(EquivalenceResults, String), CliError> {
    if cfg.intercept {
        return Err(CliError::config(
            "the weighted-bagging identity is only exact for a combiner without an intercept \
             term; disable `intercept` (the default) to run the check",
        ));
    }
    if cfg.t == 0 {
        return Err(CliError::config("t must be >= 1"));
    }
    let seed = Seed(cfg.seed);
    let data = cfg.dataset.load(seed)?;
    if data.task() == Task::Multiclass {
        return Err(CliError::config(
            "equivalence is defined for regression and binary tasks",
        ));
    }

    // An explicit combiner must be the linear no-intercept form, and pins
    // lambda_reg to the matching value.
    let lambda_reg = match &cfg.combiner {
        None => cfg.lambda_reg,
        Some(LearnerSpec::Ridge {
            lambda,
            intercept: false,
        }) => lambda * data.len() as f64,
        Some(LearnerSpec::Logistic {
            lambda,
            intercept: false,
            ..
        }) => *lambda,
        Some(other) => {
            return Err(CliError::config(format!(
                "equivalence is only defined for a linear no-intercept combiner, got '{}'",
                other.name()
            )));
        }
    };

    let mut probe_stream = seed.stream("probe", 0);
    let probes: Vec<Vec<f64>> = (0..cfg.probe_points)
        .map(|_| {
            (0..data.dim())
                .map(|_| probe_stream.next_gaussian())
                .collect()
        })
        .collect();

    let outcome = check_weighted_bagging_equivalence(
        &cfg.base,
        &data,
        cfg.t,
        lambda_reg,
        &probes,
        cfg.tolerance,
        seed,
        cfg.self_test_perturbation,
    )
    .map_err(CliError::runtime)?;

    let summary = format!(
        "equivalence: {} (max |theta diff| = {:.3e}, max |prediction diff| = {:.3e}, tol = {:.1e})",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.max_theta_diff,
        outcome.max_prediction_diff,
        outcome.tolerance,
    );
    Ok((
        EquivalenceResults {
            lambda_reg,
            t: cfg.t,
            m: data.len(),
            outcome,
        },
        summary,
    ))
}
