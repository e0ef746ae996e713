pub mod bounds;
pub mod equivalence;
pub mod experiment;
pub mod gen_data;
pub mod stability;

use serde::Serialize;

use stackstab::bounds::BoundResult;
use stackstab::stability::{BoundComparison, StabilityEstimate, StabilityMode};

/// One estimator run inside a report: the estimate plus its comparison to
/// the composed theoretical bound (not-applicable when none is known).
#[derive(Debug, Serialize)]
pub struct EstimateEntry {
    pub mode: StabilityMode,
    pub estimate: StabilityEstimate,
    pub comparison: BoundComparison,
}

pub fn build_estimate_entry(
    mode: StabilityMode,
    estimate: StabilityEstimate,
    theoretical: Option<&BoundResult>,
    kind: &stackstab::LossKind,
) -> Result<EstimateEntry, crate::CliError> {
    let comparison = match theoretical {
        Some(bound) => stackstab::stability::compare_to_bound(&estimate, bound, kind)
            .map_err(crate::CliError::runtime)?,
        None => stackstab::stability::comparison_not_applicable(&estimate),
    };
    Ok(EstimateEntry {
        mode,
        estimate,
        comparison,
    })
}
