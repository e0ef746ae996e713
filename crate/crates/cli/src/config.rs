//! Experiment configuration: JSON documents with schema validation,
//! materialized defaults, and dotted-path command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use stackstab::bounds::{
    BagQMode, BoundTask, DagQMode, GenBoundKind, OccupancyMode, SubbaggingErrorVariant,
};
use stackstab::learners::LearnerSpec;
use stackstab::loss::LossKind;
use stackstab::recipe::{BoundContext, RecipeSpec};
use stackstab::stability::{IndexPolicy, StabilityMode};
use stackstab::synth::SyntheticSpec;
use stackstab::{Dataset, Task};

use crate::CliError;

fn default_seed() -> u64 {
    0
}
fn default_trials() -> usize {
    400
}
fn default_delta() -> f64 {
    0.05
}
fn default_b() -> f64 {
    1.0
}
fn default_modes() -> Vec<StabilityMode> {
    vec![StabilityMode::Hypothesis, StabilityMode::Pointwise]
}
fn default_equivalence_t() -> usize {
    5
}
fn default_lambda_reg() -> f64 {
    1e-8
}
fn default_probe_points() -> usize {
    100
}
fn default_tolerance() -> f64 {
    1e-9
}
fn default_equivalence_base() -> LearnerSpec {
    LearnerSpec::ridge(1.0)
}
fn default_equivalence_dataset() -> DatasetConfig {
    DatasetConfig::Synthetic {
        spec: SyntheticSpec::Linear {
            m: 60,
            d: 8,
            noise_std: 0.5,
        },
    }
}

/// Where the training data comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetConfig {
    Synthetic {
        spec: SyntheticSpec,
    },
    Csv {
        path: PathBuf,
        label_column: String,
        task: Task,
    },
}

impl DatasetConfig {
    /// Materialize the dataset. Synthetic sources draw from the substream
    /// `seed.derive("data", 0)`.
    pub fn load(&self, seed: stackstab::Seed) -> Result<Dataset, CliError> {
        match self {
            DatasetConfig::Synthetic { spec } => {
                stackstab::synth::gen_synthetic(spec, seed.derive("data", 0))
                    .map_err(CliError::runtime)
            }
            DatasetConfig::Csv {
                path,
                label_column,
                task,
            } => stackstab::csv_io::load_csv(path, label_column, *task).map_err(CliError::runtime),
        }
    }

    pub fn synthetic_spec(&self) -> Option<&SyntheticSpec> {
        match self {
            DatasetConfig::Synthetic { spec } => Some(spec),
            DatasetConfig::Csv { .. } => None,
        }
    }
}

/// `stability` command configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Synthetic source the trials draw from; `m` below overrides its size.
    pub source: SyntheticSpec,
    #[serde(default)]
    pub m: Option<usize>,
    pub recipe: RecipeSpec,
    #[serde(default)]
    pub loss: Option<LossKind>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub policy: IndexPolicy,
    #[serde(default = "default_modes")]
    pub modes: Vec<StabilityMode>,
    /// Lipschitz constant used by regression-task bound composition.
    #[serde(default = "default_b")]
    pub b_lipschitz: f64,
    /// Inclusion-probability conventions for composed bag-/dag-stacking
    /// bounds.
    #[serde(default)]
    pub bag_q_mode: BagQMode,
    #[serde(default)]
    pub dag_q_mode: DagQMode,
}

impl StabilityConfig {
    pub fn training_size(&self) -> usize {
        self.m.unwrap_or_else(|| self.source.m())
    }

    pub fn loss_kind(&self) -> LossKind {
        self.loss
            .unwrap_or_else(|| default_loss_for(self.source.task()))
    }

    pub fn bound_context(&self) -> BoundContext {
        BoundContext {
            b_lipschitz: self.b_lipschitz,
            bag_q_mode: self.bag_q_mode,
            dag_q_mode: self.dag_q_mode,
        }
    }
}

pub fn default_loss_for(task: Task) -> LossKind {
    match task {
        Task::Regression => LossKind::Squared,
        Task::Binary | Task::Multiclass => LossKind::Classification01,
    }
}

/// A gamma schedule for the bagging bound: the base algorithm's stability
/// as a function of training-set size.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form", deny_unknown_fields)]
pub enum GammaSchedule {
    Knn { k: usize },
    Ridge { lambda: f64 },
    Constant { value: f64 },
}

impl GammaSchedule {
    pub fn evaluate(&self, size: f64) -> f64 {
        match *self {
            GammaSchedule::Knn { k } => k as f64 / size,
            GammaSchedule::Ridge { lambda } => 1.0 / (lambda * size),
            GammaSchedule::Constant { value } => value,
        }
    }
}

/// Stability constants for one bound input: either a raw number or a
/// learner whose quoted constant is evaluated at the given size.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Value(f64),
    Learner(LearnerSpec),
}

impl BetaSpec {
    pub fn resolve(&self, size: usize, loss: &LossKind) -> Result<f64, CliError> {
        match self {
            BetaSpec::Value(v) => Ok(*v),
            BetaSpec::Learner(spec) => stackstab::learners::theoretical_stability(spec, size, loss)
                .value
                .ok_or_else(|| {
                    CliError::config(format!(
                        "no stability constant is stated for '{}'",
                        spec.name()
                    ))
                }),
        }
    }
}

/// One bound calculator invocation in a `bounds` config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundRequest {
    Stacking {
        combiner: BetaSpec,
        bases: Vec<BetaSpec>,
        #[serde(default)]
        m: Option<usize>,
    },
    InclusionTail {
        t: usize,
        s: usize,
        q: f64,
    },
    BagStacking {
        t: usize,
        m: usize,
        combiner: BetaSpec,
        bases: Vec<BetaSpec>,
        #[serde(default)]
        q_mode: BagQMode,
    },
    DagStacking {
        t: usize,
        p: usize,
        m: usize,
        combiner: BetaSpec,
        bases: Vec<BetaSpec>,
        #[serde(default)]
        q_mode: DagQMode,
    },
    BaggingStability {
        gamma: GammaSchedule,
        m: usize,
        #[serde(default = "default_b")]
        b: f64,
        task: BoundTask,
        #[serde(default)]
        mode: OccupancyMode,
    },
    SubbaggingStability {
        gamma: BetaSpec,
        p: usize,
        m: usize,
        #[serde(default = "default_b")]
        b: f64,
        task: BoundTask,
    },
    CombinerOnBagging {
        combiner: BetaSpec,
        #[serde(default)]
        combiner_m: Option<usize>,
        #[serde(default = "default_b")]
        b: f64,
        inner: Box<BoundRequest>,
    },
    GenBound {
        kind: GenBoundKind,
        observed_error: f64,
        beta: f64,
        #[serde(rename = "m_bound")]
        m_bound: f64,
        m: usize,
        #[serde(default = "default_delta")]
        delta: f64,
    },
    GenBoundSubbagging {
        variant: SubbaggingErrorVariant,
        observed_error: f64,
        gamma: f64,
        p: usize,
        m: usize,
        #[serde(rename = "m_bound")]
        m_bound: f64,
        #[serde(default = "default_b")]
        b: f64,
        #[serde(default = "default_delta")]
        delta: f64,
    },
}

/// `bounds` command configuration: a pure calculator pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub loss: Option<LossKind>,
    pub bounds: Vec<BoundRequest>,
}

/// `equivalence` command configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_equivalence_dataset")]
    pub dataset: DatasetConfig,
    #[serde(default = "default_equivalence_base")]
    pub base: LearnerSpec,
    #[serde(default = "default_equivalence_t")]
    pub t: usize,
    #[serde(default = "default_lambda_reg")]
    pub lambda_reg: f64,
    /// The identity requires a no-intercept combiner; enabling this is an
    /// error by design.
    #[serde(default)]
    pub intercept: bool,
    /// Optional explicit combiner; must be a linear no-intercept spec.
    #[serde(default)]
    pub combiner: Option<LearnerSpec>,
    #[serde(default = "default_probe_points")]
    pub probe_points: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Perturbs one fitted weight to confirm the detector reports failures.
    #[serde(default)]
    pub self_test_perturbation: f64,
}

/// Holdout source for experiments.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HoldoutConfig {
    /// Fresh synthetic draw of this many examples (synthetic datasets only).
    Synthetic { n: usize },
    /// Split this fraction off the loaded dataset before training.
    Fraction { fraction: f64 },
}

/// Stability section inside an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentStabilitySection {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub policy: IndexPolicy,
    #[serde(default = "default_modes")]
    pub modes: Vec<StabilityMode>,
    /// Source for stability trials; defaults to the experiment's synthetic
    /// dataset spec.
    #[serde(default)]
    pub source: Option<SyntheticSpec>,
}

/// Bound settings inside an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBoundSection {
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Loss bound M; defaults to 1 for classification losses and to
    /// `(max |y| + max |prediction|)^2` observed on the data for squared.
    #[serde(default)]
    pub m_bound: Option<f64>,
    #[serde(default = "default_b")]
    pub b_lipschitz: f64,
    /// Uniform stability constant for the uniform-stability bound; omitted
    /// unless supplied (no estimator exists for it).
    #[serde(default)]
    pub beta_uniform: Option<f64>,
    /// Inclusion-probability conventions for composed bag-/dag-stacking
    /// bounds.
    #[serde(default)]
    pub bag_q_mode: BagQMode,
    #[serde(default)]
    pub dag_q_mode: DagQMode,
}

impl ExperimentBoundSection {
    pub fn bound_context(&self) -> BoundContext {
        BoundContext {
            b_lipschitz: self.b_lipschitz,
            bag_q_mode: self.bag_q_mode,
            dag_q_mode: self.dag_q_mode,
        }
    }
}

impl Default for ExperimentBoundSection {
    fn default() -> Self {
        ExperimentBoundSection {
            delta: default_delta(),
            m_bound: None,
            b_lipschitz: default_b(),
            beta_uniform: None,
            bag_q_mode: BagQMode::default(),
            dag_q_mode: DagQMode::default(),
        }
    }
}

/// `experiment` command configuration: the composed pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub dataset: DatasetConfig,
    pub recipe: RecipeSpec,
    #[serde(default)]
    pub loss: Option<LossKind>,
    #[serde(default)]
    pub holdout: Option<HoldoutConfig>,
    #[serde(default)]
    pub stability: Option<ExperimentStabilitySection>,
    #[serde(default)]
    pub bounds: ExperimentBoundSection,
    #[serde(default)]
    pub save_model: Option<PathBuf>,
}

/// Read a config file (or `{}` when absent), apply `--seed` and dotted-path
/// `--set` overrides, then deserialize into the typed config.
pub fn load_config<T: serde::de::DeserializeOwned>(
    path: Option<&Path>,
    seed_override: Option<u64>,
    overrides: &[String],
) -> Result<T, CliError> {
    let mut value: Value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(serde_json::Map::new()),
    };
    if let Some(seed) = seed_override {
        value["seed"] = Value::from(seed);
    }
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    serde_json::from_value(value).map_err(|e| CliError::config(format!("config: {e}")))
}

/// Apply one `path.to.key=value` override onto the raw config document.
/// The value is parsed as JSON when possible and as a bare string otherwise.
fn apply_override(root: &mut Value, entry: &str) -> Result<(), CliError> {
    let (path, raw) = entry
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override '{entry}' is not KEY=VALUE")))?;
    let parsed: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(CliError::config(format!(
            "override path '{path}' is malformed"
        )));
    }
    for segment in &segments[..segments.len() - 1] {
        if !cursor.is_object() {
            return Err(CliError::config(format!(
                "override path '{path}' crosses a non-object at '{segment}'"
            )));
        }
        cursor = cursor
            .as_object_mut()
            .unwrap()
            .entry(segment.to_string())
            .or_insert(Value::Object(serde_json::Map::new()));
    }
    match cursor.as_object_mut() {
        Some(map) => {
            map.insert(segments[segments.len() - 1].to_string(), parsed);
            Ok(())
        }
        None => Err(CliError::config(format!(
            "override path '{path}' lands in a non-object"
        ))),
    }
}
