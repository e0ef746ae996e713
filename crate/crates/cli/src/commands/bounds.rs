//! `bounds`: pure calculator pass-through, no training.

use serde::Serialize;

use stackstab::bounds::{self, BoundResult};
use stackstab::LossKind;

use crate::config::{BoundRequest, BoundsConfig};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct BoundsResults {
    pub bounds: Vec<BoundResult>,
}

pub fn run(cfg: &BoundsConfig) -> Result<(BoundsResults, String), CliError> {
    if cfg.bounds.is_empty() {
        return Err(CliError::config("bounds config lists no bound requests"));
    }
    let loss = cfg.loss.unwrap_or(LossKind::Classification01);
    let results: Vec<BoundResult> = cfg
        .bounds
        .iter()
        .map(|request| evaluate(request, &loss))
        .collect::<Result<_, _>>()?;
    let summary = format!("bounds: evaluated {} request(s)", results.len());
    Ok((BoundsResults { bounds: results }, summary))
}

fn evaluate(request: &BoundRequest, loss: &LossKind) -> Result<BoundResult, CliError> {
    // Bad calculator inputs are config errors: the command runs no training
    // and everything it consumes came straight from the document.
    match request {
        BoundRequest::Stacking { combiner, bases, m } => {
            let size = m.unwrap_or(1);
            let cb = combiner.resolve(size, loss)?;
            let bb: Vec<f64> = bases
                .iter()
                .map(|b| b.resolve(size, loss))
                .collect::<Result<_, _>>()?;
            bounds::stacking_bound(cb, &bb).map_err(CliError::config_from)
        }
        BoundRequest::InclusionTail { t, s, q } => {
            let value = bounds::inclusion_tail(*t, *s, *q).map_err(CliError::config_from)?;
            let mut result = BoundResult {
                value,
                formula: "inclusion_tail".to_string(),
                inputs: Default::default(),
                notes: vec![],
            };
            result.inputs.insert("t".into(), serde_json::json!(t));
            result.inputs.insert("s".into(), serde_json::json!(s));
            result.inputs.insert("q".into(), serde_json::json!(q));
            Ok(result)
        }
        BoundRequest::BagStacking {
            t,
            m,
            combiner,
            bases,
            q_mode,
        } => {
            let cb = combiner.resolve(*m, loss)?;
            let bb: Vec<f64> = bases
                .iter()
                .map(|b| b.resolve(*m, loss))
                .collect::<Result<_, _>>()?;
            bounds::bag_stacking_bound(*t, *m, cb, &bb, *q_mode).map_err(CliError::config_from)
        }
        BoundRequest::DagStacking {
            t,
            p,
            m,
            combiner,
            bases,
            q_mode,
        } => {
            let cb = combiner.resolve(*m, loss)?;
            // Base constants are evaluated at m: the damping factor alone
            // carries the subsampling effect.
            let bb: Vec<f64> = bases
                .iter()
                .map(|b| b.resolve(*m, loss))
                .collect::<Result<_, _>>()?;
            bounds::dag_stacking_bound(*t, *p, *m, cb, &bb, *q_mode).map_err(CliError::config_from)
        }
        BoundRequest::BaggingStability {
            gamma,
            m,
            b,
            task,
            mode,
        } => {
            let schedule = |size: f64| gamma.evaluate(size);
            bounds::bagging_stability_bound(&schedule, *m, *b, *task, *mode)
                .map_err(CliError::config_from)
        }
        BoundRequest::SubbaggingStability {
            gamma,
            p,
            m,
            b,
            task,
        } => {
            let g = gamma.resolve(*p, loss)?;
            bounds::subbagging_stability_bound(g, *p, *m, *b, *task).map_err(CliError::config_from)
        }
        BoundRequest::CombinerOnBagging {
            combiner,
            combiner_m,
            b,
            inner,
        } => {
            let inner_result = evaluate(inner, loss)?;
            let cb = combiner.resolve(combiner_m.unwrap_or(1), loss)?;
            bounds::combiner_on_bagging_bound(cb, *b, &inner_result).map_err(CliError::config_from)
        }
        BoundRequest::GenBound {
            kind,
            observed_error,
            beta,
            m_bound,
            m,
            delta,
        } => bounds::gen_bound(*kind, *observed_error, *beta, *m_bound, *m, *delta)
            .map_err(CliError::config_from),
        BoundRequest::GenBoundSubbagging {
            variant,
            observed_error,
            gamma,
            p,
            m,
            m_bound,
            b,
            delta,
        } => bounds::gen_bound_subbagging(
            *variant,
            *observed_error,
            *gamma,
            *p,
            *m,
            *m_bound,
            *b,
            *delta,
        )
        .map_err(CliError::config_from),
    }
}
