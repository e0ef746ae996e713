//! `stability`: Monte-Carlo stability estimation with bound pairing.

use serde::Serialize;

use stackstab::bounds::BoundResult;
use stackstab::stability::{
    estimate_hypothesis_stability, estimate_pointwise_hypothesis_stability, StabilityMode,
    StabilitySettings,
};
use stackstab::{LossKind, Seed, Task};

use crate::commands::{build_estimate_entry, EstimateEntry};
use crate::config::StabilityConfig;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct StabilityResults {
    pub m: usize,
    pub loss: LossKind,
    pub theoretical: Option<BoundResult>,
    pub estimates: Vec<EstimateEntry>,
}

pub fn run(cfg: &StabilityConfig) -> Result<(StabilityResults, String), CliError> {
    let m = cfg.training_size();
    if m < 2 {
        return Err(CliError::config("stability estimation requires m >= 2"));
    }
    if cfg.trials == 0 {
        return Err(CliError::config("trials must be >= 1"));
    }
    let kind = cfg.loss_kind();
    if matches!(kind, LossKind::Classification01 | LossKind::Gamma { .. })
        && cfg.source.task() != Task::Binary
    {
        return Err(CliError::config(format!(
            "loss '{}' requires a binary source",
            kind.name()
        )));
    }

    let theoretical = cfg
        .recipe
        .theoretical_bound(m, &kind, &cfg.bound_context())
        .map_err(CliError::config_from)?;

    let settings = StabilitySettings {
        source: cfg.source,
        m,
        kind,
        trials: cfg.trials,
        policy: cfg.policy.clone(),
    };
    let seed = Seed(cfg.seed);
    let mut estimates = Vec::new();
    for mode in &cfg.modes {
        let estimate = match mode {
            StabilityMode::Hypothesis => {
                estimate_hypothesis_stability(&cfg.recipe, &settings, seed)
            }
            StabilityMode::Pointwise => {
                estimate_pointwise_hypothesis_stability(&cfg.recipe, &settings, seed)
            }
        }
        .map_err(CliError::runtime)?;
        estimates.push(build_estimate_entry(
            *mode,
            estimate,
            theoretical.as_ref(),
            &kind,
        )?);
    }

    let summary = match &theoretical {
        Some(bound) => format!(
            "stability: {} estimate(s) at m={m}; theoretical bound {:.6e} ({})",
            estimates.len(),
            bound.value,
            bound.formula
        ),
        None => format!(
            "stability: {} estimate(s) at m={m}; no theoretical bound known for this recipe",
            estimates.len()
        ),
    };
    Ok((
        StabilityResults {
            m,
            loss: kind,
            theoretical,
            estimates,
        },
        summary,
    ))
}
