//! `experiment`: the composed pipeline — train, error estimates, stability
//! estimates, theoretical bounds, and generalization-bound evaluation.

use serde::Serialize;

use stackstab::bounds::{
    gen_bound, gen_bound_subbagging, BoundResult, GenBoundKind, SubbaggingErrorVariant,
};
use stackstab::recipe::{AnyModel, RecipeSpec};
use stackstab::risk::{empirical_error, holdout_risk, loo_error, MeanWithError};
use stackstab::stability::{
    estimate_hypothesis_stability, estimate_pointwise_hypothesis_stability, StabilityMode,
    StabilitySettings,
};
use stackstab::{Dataset, LossKind, Predict, Seed, Task, Trainer};

use crate::commands::{build_estimate_entry, EstimateEntry};
use crate::config::{default_loss_for, ExperimentConfig, HoldoutConfig};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct DataSummary {
    pub m: usize,
    pub d: usize,
    pub task: Task,
    pub holdout_n: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ErrorSummary {
    pub loss: LossKind,
    pub empirical: f64,
    pub loo: f64,
    pub holdout: Option<MeanWithError>,
    pub m_bound: f64,
    pub m_bound_source: String,
}

#[derive(Debug, Serialize)]
pub struct GenBoundEntry {
    pub bound: BoundResult,
    pub beta_source: String,
    /// Whether the measured holdout risk sits below the bound value; absent
    /// without a holdout set.
    pub satisfied_vs_holdout: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct ExperimentResults {
    pub data: DataSummary,
    pub errors: ErrorSummary,
    pub theoretical_stability: Option<BoundResult>,
    pub stability: Option<Vec<EstimateEntry>>,
    pub gen_bounds: Vec<GenBoundEntry>,
}

fn stage<T>(name: &str, r: Result<T, stackstab::Error>) -> Result<T, CliError> {
    r.map_err(|e| CliError::runtime_msg(format!("stage {name}: {e}")))
}

fn split_holdout(data: Dataset, fraction: f64, seed: Seed) -> Result<(Dataset, Dataset), CliError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(CliError::config("holdout fraction must be in (0, 1)"));
    }
    let m = data.len();
    let holdout_n = ((m as f64) * fraction).ceil() as usize;
    if holdout_n == 0 || holdout_n >= m {
        return Err(CliError::config(format!(
            "holdout fraction {fraction} leaves no usable split of {m} rows"
        )));
    }
    let mut order: Vec<usize> = (0..m).collect();
    seed.stream("holdout-split", 0).shuffle(&mut order);
    let holdout_idx = &order[..holdout_n];
    let train_idx = &order[holdout_n..];
    let holdout = stage("load-data", data.reindex(holdout_idx))?;
    let train = stage("load-data", data.reindex(train_idx))?;
    Ok((train, holdout))
}

pub fn run(cfg: &ExperimentConfig) -> Result<(ExperimentResults, String), CliError> {
    let seed = Seed(cfg.seed);

    // Data and holdout.
    let loaded = cfg.dataset.load(seed)?;
    let (train, holdout): (Dataset, Option<Dataset>) = match &cfg.holdout {
        None => (loaded, None),
        Some(HoldoutConfig::Fraction { fraction }) => {
            let (t, h) = split_holdout(loaded, *fraction, seed)?;
            (t, Some(h))
        }
        Some(HoldoutConfig::Synthetic { n }) => {
            let spec = cfg.dataset.synthetic_spec().ok_or_else(|| {
                CliError::config("holdout.synthetic requires a synthetic dataset")
            })?;
            if *n == 0 {
                return Err(CliError::config("holdout n must be >= 1"));
            }
            let holdout = stage(
                "holdout",
                stackstab::synth::gen_synthetic(&spec.with_m(*n), seed.derive("holdout", 0)),
            )?;
            (loaded, Some(holdout))
        }
    };
    let m = train.len();
    let kind = cfg.loss.unwrap_or_else(|| default_loss_for(train.task()));

    // Train and score.
    let model = stage("train", cfg.recipe.train(&train, seed.derive("train", 0)))?;
    let empirical = stage("empirical-error", empirical_error(&model, &train, &kind))?;
    let loo = stage("loo-error", loo_error(&cfg.recipe, &train, &kind, seed))?;
    let holdout_est = match &holdout {
        Some(h) => Some(stage("holdout-risk", holdout_risk(&model, h, &kind))?),
        None => None,
    };

    // Loss bound M: intrinsic for the bounded losses, else configured, else
    // derived from the data at hand and raised to cover every observed
    // error so the bound preconditions hold.
    let (m_bound, m_bound_source) = match (kind.intrinsic_bound(), cfg.bounds.m_bound) {
        (Some(b), _) => (b, "intrinsic".to_string()),
        (None, Some(b)) => (b, "config".to_string()),
        (None, None) => {
            let derived = default_squared_bound(&model, &train, holdout.as_ref())?;
            let mut raised = derived.max(empirical).max(loo);
            if let Some(h) = &holdout_est {
                raised = raised.max(h.mean);
            }
            (
                raised,
                "default (max|y| + max|prediction|)^2 on the data at hand".to_string(),
            )
        }
    };

    // Theoretical stability of the recipe, when composable.
    let theoretical = cfg
        .recipe
        .theoretical_bound(m, &kind, &cfg.bounds.bound_context())
        .map_err(CliError::config_from)?;

    // Monte-Carlo stability estimates.
    let stability_entries = match &cfg.stability {
        None => None,
        Some(section) => {
            let source = section
                .source
                .or_else(|| cfg.dataset.synthetic_spec().copied())
                .ok_or_else(|| {
                    CliError::config(
                        "stability estimation needs a synthetic source; set stability.source",
                    )
                })?;
            let settings = StabilitySettings {
                source,
                m,
                kind,
                trials: section.trials,
                policy: section.policy.clone(),
            };
            let mut entries = Vec::new();
            for mode in &section.modes {
                let estimate = stage(
                    "stability",
                    match mode {
                        StabilityMode::Hypothesis => {
                            estimate_hypothesis_stability(&cfg.recipe, &settings, seed)
                        }
                        StabilityMode::Pointwise => {
                            estimate_pointwise_hypothesis_stability(&cfg.recipe, &settings, seed)
                        }
                    },
                )?;
                entries.push(build_estimate_entry(
                    *mode,
                    estimate,
                    theoretical.as_ref(),
                    &kind,
                )?);
            }
            Some(entries)
        }
    };

    // Generalization bounds. Beta comes from the composed theoretical bound
    // when one exists, falling back to the matching empirical estimate.
    let mut gen_bounds = Vec::new();
    let delta = cfg.bounds.delta;
    let holdout_mean = holdout_est.as_ref().map(|h| h.mean);
    let estimate_for = |mode: StabilityMode| -> Option<f64> {
        stability_entries.as_ref().and_then(|entries| {
            entries
                .iter()
                .find(|e| e.mode == mode)
                .map(|e| e.estimate.mean)
        })
    };

    let hypothesis_beta = theoretical
        .as_ref()
        .map(|b| (b.value, format!("theoretical ({})", b.formula)))
        .or_else(|| {
            estimate_for(StabilityMode::Hypothesis).map(|v| (v, "estimated (hypothesis)".into()))
        });
    if let Some((beta, source)) = hypothesis_beta {
        let bound = stage(
            "gen-bounds",
            gen_bound(GenBoundKind::Hypothesis, loo, beta, m_bound, m, delta),
        )?;
        gen_bounds.push(entry(bound, source, holdout_mean));
    }

    let pointwise_beta = theoretical
        .as_ref()
        .map(|b| (b.value, format!("theoretical ({})", b.formula)))
        .or_else(|| {
            estimate_for(StabilityMode::Pointwise).map(|v| (v, "estimated (pointwise)".into()))
        });
    if let Some((beta, source)) = pointwise_beta {
        let bound = stage(
            "gen-bounds",
            gen_bound(GenBoundKind::Pointwise, empirical, beta, m_bound, m, delta),
        )?;
        gen_bounds.push(entry(bound, source, holdout_mean));
    }

    if let Some(beta_uniform) = cfg.bounds.beta_uniform {
        let bound = stage(
            "gen-bounds",
            gen_bound(
                GenBoundKind::Uniform,
                empirical,
                beta_uniform,
                m_bound,
                m,
                delta,
            ),
        )?;
        gen_bounds.push(entry(bound, "config (beta_uniform)".into(), holdout_mean));
    }

    // Subbagging-specific bounds when the base constant is known.
    if let RecipeSpec::Subbagging { base, p, .. } = &cfg.recipe {
        if let Some(gamma_p) = stackstab::learners::theoretical_stability(base, *p, &kind).value {
            for (variant, observed) in [
                (SubbaggingErrorVariant::Loo, loo),
                (SubbaggingErrorVariant::Emp, empirical),
            ] {
                let bound = stage(
                    "gen-bounds",
                    gen_bound_subbagging(
                        variant,
                        observed,
                        gamma_p,
                        *p,
                        m,
                        m_bound,
                        cfg.bounds.b_lipschitz,
                        delta,
                    ),
                )?;
                gen_bounds.push(entry(
                    bound,
                    format!("theoretical gamma_p at p={p}"),
                    holdout_mean,
                ));
            }
        }
    }

    if let Some(path) = &cfg.save_model {
        let text = match &model {
            AnyModel::Ensemble(e) => e.to_json(),
            AnyModel::Single(s) => serde_json::to_string_pretty(s)
                .map_err(|e| CliError::runtime_msg(format!("stage save-model: {e}")))?,
        };
        std::fs::write(path, text)
            .map_err(|e| CliError::runtime_msg(format!("stage save-model: {e}")))?;
    }

    let summary = format!(
        "experiment: m={m}, R_emp={empirical:.4}, R_loo={loo:.4}{}, {} gen bound(s)",
        match &holdout_est {
            Some(h) => format!(", holdout={:.4}+-{:.4}", h.mean, h.stderr),
            None => String::new(),
        },
        gen_bounds.len()
    );

    Ok((
        ExperimentResults {
            data: DataSummary {
                m,
                d: train.dim(),
                task: train.task(),
                holdout_n: holdout.as_ref().map(|h| h.len()),
            },
            errors: ErrorSummary {
                loss: kind,
                empirical,
                loo,
                holdout: holdout_est,
                m_bound,
                m_bound_source,
            },
            theoretical_stability: theoretical,
            stability: stability_entries,
            gen_bounds,
        },
        summary,
    ))
}

fn entry(bound: BoundResult, beta_source: String, holdout_mean: Option<f64>) -> GenBoundEntry {
    GenBoundEntry {
        satisfied_vs_holdout: holdout_mean.map(|h| h <= bound.value),
        bound,
        beta_source,
    }
}

fn default_squared_bound(
    model: &AnyModel,
    train: &Dataset,
    holdout: Option<&Dataset>,
) -> Result<f64, CliError> {
    let mut max_label = 0.0f64;
    let mut max_pred = 0.0f64;
    let mut scan = |data: &Dataset| -> Result<(), CliError> {
        for e in data.iter() {
            max_label = max_label.max(e.y.abs());
            let p = model.predict(&e.x).map_err(CliError::runtime)?;
            max_pred = max_pred.max(p.abs());
        }
        Ok(())
    };
    scan(train)?;
    if let Some(h) = holdout {
        scan(h)?;
    }
    let span = max_label + max_pred;
    Ok(span * span)
}
