//! Closed-form stability and generalization bound calculators.
//!
//! Pure functions over scalars. Every result echoes its inputs and the mode
//! switches that produced it, because the quoted formulas come with caveats
//! (per-paper constants, inclusion-probability conventions) that a reader
//! of the report needs to see.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `m` for which the occupancy distribution is computed exactly.
pub const EXACT_OCCUPANCY_LIMIT: usize = 30;
/// Largest `T` for which binomial tails use exact integer coefficients.
pub const EXACT_BINOMIAL_LIMIT: usize = 64;

/// Value of a bound plus the inputs and conventions that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub formula: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(value: f64, formula: &str) -> Self {
        BoundResult {
            value,
            formula: formula.to_string(),
            inputs: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("bound inputs serialize"),
        );
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn require_nonnegative(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::invalid_param(name, format!("must be >= 0, got {v}")));
    }
    Ok(())
}

/// Hypothesis stability of classical stacking: the product of the combiner
/// stability and every base stability.
pub fn stacking_bound(combiner_beta: f64, base_betas: &[f64]) -> Result<BoundResult> {
    require_nonnegative("combiner_beta", combiner_beta)?;
    for &b in base_betas {
        require_nonnegative("base_betas", b)?;
    }
    let value = combiner_beta * base_betas.iter().product::<f64>();
    Ok(BoundResult::new(value, "stacking_product")
        .input("combiner_beta", combiner_beta)
        .input("base_betas", base_betas)
        .input("t", base_betas.len()))
}

/// `P(N > s)` for `N ~ Binomial(T, q)`: the probability that an example
/// appears in more than `s` of `T` replicates.
///
/// Exact integer binomial coefficients for `T <= 64`; log-space terms
/// beyond that. The sum is clamped to [0, 1] so downstream products cannot
/// exceed the factor-free bound by floating-point dust.
pub fn inclusion_tail(t: usize, s: usize, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid_param(
            "q",
            format!("must be in [0,1], got {q}"),
        ));
    }
    if s > t {
        return Err(Error::invalid_param(
            "s",
            format!("must satisfy s <= T, got s={s}, T={t}"),
        ));
    }
    let mut tail = 0.0f64;
    for k in (s + 1)..=t {
        let coeff = if t <= EXACT_BINOMIAL_LIMIT {
            binomial_u128(t, k) as f64
        } else {
            ln_binomial(t, k).exp()
        };
        tail += coeff * q.powi(k as i32) * (1.0 - q).powi((t - k) as i32);
    }
    Ok(tail.clamp(0.0, 1.0))
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (n - k + i) as u128 / i as u128;
    }
    c
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|i| (((n - k + i) as f64) / i as f64).ln())
        .sum()
}

/// Inclusion-probability convention for bag-stacking. The conventions
/// disagree, so the chosen mode is always echoed in the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BagQMode {
    /// `q = 0.632 / m`.
    #[default]
    Paper,
    /// `q = 1 - (1 - 1/m)^m`, the probability that a given example appears
    /// at least once in a size-m draw with replacement.
    Standard,
}

impl BagQMode {
    pub fn q(self, m: usize) -> f64 {
        match self {
            BagQMode::Paper => 0.632 / m as f64,
            BagQMode::Standard => 1.0 - (1.0 - 1.0 / m as f64).powi(m as i32),
        }
    }

    fn label(self) -> &'static str {
        match self {
            BagQMode::Paper => "paper (q = 0.632/m)",
            BagQMode::Standard => "standard (q = 1-(1-1/m)^m)",
        }
    }
}

/// Inclusion-probability convention for dag-stacking. As with
/// [`BagQMode`], the chosen mode is echoed in the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DagQMode {
    /// `q = p / m`, the probability that a given example lands in one
    /// size-p subsample.
    #[default]
    PaperExample,
    /// `q = 1 / p`.
    PaperText,
}

impl DagQMode {
    pub fn q(self, p: usize, m: usize) -> f64 {
        match self {
            DagQMode::PaperExample => p as f64 / m as f64,
            DagQMode::PaperText => 1.0 / p as f64,
        }
    }

    fn label(self) -> &'static str {
        match self {
            DagQMode::PaperExample => "paper-example (q = p/m)",
            DagQMode::PaperText => "paper-text (q = 1/p)",
        }
    }
}

/// Bag-stacking stability: the stacking product damped by the probability
/// that a given example appears in more than half of the `T` bootstrap
/// replicates. The tail sums from `floor(T/2) + 1`.
pub fn bag_stacking_bound(
    t: usize,
    m: usize,
    combiner_beta: f64,
    base_betas: &[f64],
    q_mode: BagQMode,
) -> Result<BoundResult> {
    if m == 0 {
        return Err(Error::invalid_param("m", "must be >= 1"));
    }
    let q = q_mode.q(m);
    let tail = inclusion_tail(t, t / 2, q)?;
    let product = stacking_bound(combiner_beta, base_betas)?;
    Ok(BoundResult::new(tail * product.value, "bag_stacking")
        .input("t", t)
        .input("m", m)
        .input("q", q)
        .input("q_mode", q_mode)
        .input("inclusion_tail", tail)
        .input("combiner_beta", combiner_beta)
        .input("base_betas", base_betas)
        .note(format!("inclusion probability mode: {}", q_mode.label())))
}

/// Dag-stacking stability: as bag-stacking with the subsample inclusion
/// probability selected by `q_mode`.
pub fn dag_stacking_bound(
    t: usize,
    p: usize,
    m: usize,
    combiner_beta: f64,
    base_betas: &[f64],
    q_mode: DagQMode,
) -> Result<BoundResult> {
    if p == 0 || p > m {
        return Err(Error::invalid_param(
            "p",
            format!("must satisfy 1 <= p <= m, got p={p}, m={m}"),
        ));
    }
    let q = q_mode.q(p, m);
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid_param(
            "q",
            format!("mode produced q={q} outside [0,1]"),
        ));
    }
    let tail = inclusion_tail(t, t / 2, q)?;
    let product = stacking_bound(combiner_beta, base_betas)?;
    Ok(BoundResult::new(tail * product.value, "dag_stacking")
        .input("t", t)
        .input("p", p)
        .input("m", m)
        .input("q", q)
        .input("q_mode", q_mode)
        .input("inclusion_tail", tail)
        .input("combiner_beta", combiner_beta)
        .input("base_betas", base_betas)
        .note(format!("inclusion probability mode: {}", q_mode.label())))
}

/// Exact distribution of the number of distinct values among `m` uniform
/// draws with replacement from `m` items: `out[k-1] = P[d(r) = k]`.
///
/// `P[d = k] = C(m,k) * k! * S(m,k) / m^m` with Stirling numbers of the
/// second kind, evaluated in arbitrary precision before the final division.
pub fn occupancy_distribution(m: usize) -> Vec<f64> {
    assert!(
        (1..=EXACT_OCCUPANCY_LIMIT).contains(&m),
        "exact occupancy needs 1 <= m <= 30"
    );
    // Stirling numbers S(n, k) for n = m.
    let mut stirling: Vec<Vec<BigUint>> = vec![vec![BigUint::from(0u32); m + 1]; m + 1];
    stirling[0][0] = BigUint::from(1u32);
    for n in 1..=m {
        for k in 1..=n {
            let carry = &stirling[n - 1][k] * k + &stirling[n - 1][k - 1];
            stirling[n][k] = carry;
        }
    }
    let total = BigUint::from(m).pow(m as u32);
    let total_f = total.to_f64().expect("m^m fits in f64 range for m <= 30");
    let mut out = Vec::with_capacity(m);
    let mut factorial = BigUint::from(1u32);
    let mut choose = BigUint::from(1u32);
    for k in 1..=m {
        factorial *= k as u32;
        choose = choose * (m - k + 1) as u32 / k as u32;
        let numerator = &choose * &factorial * &stirling[m][k];
        out.push(numerator.to_f64().expect("occupancy numerator fits f64") / total_f);
    }
    out
}

/// Which task variant of the bagging/subbagging propositions applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundTask {
    /// B-Lipschitz loss; leading constant `B`.
    Regression,
    /// Classification loss; leading constant 2 (no B).
    Classification,
}

/// How `P[d(r) = k]` enters the bagging bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccupancyMode {
    /// Exact distribution for `m <= 30`, the 0.632 approximation beyond.
    #[default]
    Auto,
    Exact,
    Approximate,
}

/// Random hypothesis stability of bagging: the expected `k gamma_k / m`
/// under the distinct-count distribution, scaled by `B` (regression) or 2
/// (classification). `gamma` maps a training-set size to the base
/// algorithm's stability at that size; the approximate mode evaluates it at
/// the real-valued size `0.632 m`.
pub fn bagging_stability_bound(
    gamma: &dyn Fn(f64) -> f64,
    m: usize,
    b: f64,
    task: BoundTask,
    mode: OccupancyMode,
) -> Result<BoundResult> {
    if m == 0 {
        return Err(Error::invalid_param("m", "must be >= 1"));
    }
    require_nonnegative("B", b)?;
    let leading = match task {
        BoundTask::Regression => b,
        BoundTask::Classification => 2.0,
    };
    let exact = match mode {
        OccupancyMode::Auto => m <= EXACT_OCCUPANCY_LIMIT,
        OccupancyMode::Exact => {
            if m > EXACT_OCCUPANCY_LIMIT {
                return Err(Error::invalid_param(
                    "mode",
                    format!("exact occupancy supports m <= {EXACT_OCCUPANCY_LIMIT}"),
                ));
            }
            true
        }
        OccupancyMode::Approximate => false,
    };
    let (value, mode_label) = if exact {
        let dist = occupancy_distribution(m);
        let mut acc = 0.0;
        for (k, &pk) in (1..=m).zip(dist.iter()) {
            let g = gamma(k as f64);
            require_nonnegative("gamma_k", g)?;
            acc += (k as f64) * g / (m as f64) * pk;
        }
        (leading * acc, "exact-occupancy")
    } else {
        let g = gamma(0.632 * m as f64);
        require_nonnegative("gamma_k", g)?;
        (leading * 0.632 * g, "approx-0.632")
    };
    let formula = match task {
        BoundTask::Regression => "bagging_stability_regression",
        BoundTask::Classification => "bagging_stability_classification",
    };
    Ok(BoundResult::new(value, formula)
        .input("m", m)
        .input("B", b)
        .input("task", task)
        .input("occupancy_mode", mode_label)
        .input("leading_constant", leading)
        .note(format!("occupancy mode: {mode_label}")))
}

/// Stability of subbagging: `B gamma_p p / m` for regression,
/// `2 gamma_p p / m` for classification.
pub fn subbagging_stability_bound(
    gamma_p: f64,
    p: usize,
    m: usize,
    b: f64,
    task: BoundTask,
) -> Result<BoundResult> {
    if p == 0 || p > m {
        return Err(Error::invalid_param(
            "p",
            format!("must satisfy 1 <= p <= m, got p={p}, m={m}"),
        ));
    }
    require_nonnegative("gamma_p", gamma_p)?;
    require_nonnegative("B", b)?;
    let leading = match task {
        BoundTask::Regression => b,
        BoundTask::Classification => 2.0,
    };
    let value = leading * gamma_p * p as f64 / m as f64;
    let formula = match task {
        BoundTask::Regression => "subbagging_stability_regression",
        BoundTask::Classification => "subbagging_stability_classification",
    };
    Ok(BoundResult::new(value, formula)
        .input("gamma_p", gamma_p)
        .input("p", p)
        .input("m", m)
        .input("B", b)
        .input("task", task)
        .input("leading_constant", leading))
}

/// Stability of a combiner trained on top of bagging or subbagging: the
/// inner bound times the combiner stability, with the `B` factor applied
/// exactly once (regression inner bounds already carry it; classification
/// inner bounds carry the constant 2 instead, so `B` multiplies here).
pub fn combiner_on_bagging_bound(
    combiner_beta: f64,
    b: f64,
    inner: &BoundResult,
) -> Result<BoundResult> {
    require_nonnegative("combiner_beta", combiner_beta)?;
    require_nonnegative("B", b)?;
    let b_factor = if inner.formula.contains("classification") {
        b
    } else if inner.formula.contains("regression") {
        1.0
    } else {
        return Err(Error::invalid_param(
            "inner",
            format!(
                "expected a bagging/subbagging stability bound, got '{}'",
                inner.formula
            ),
        ));
    };
    let value = combiner_beta * b_factor * inner.value;
    Ok(BoundResult::new(value, "combiner_on_bagging")
        .input("combiner_beta", combiner_beta)
        .input("B", b)
        .input("b_factor_applied", b_factor)
        .input("inner_formula", inner.formula.clone())
        .input("inner_value", inner.value))
}

/// Which stability notion the generalization bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenBoundKind {
    /// Leave-one-out bound from hypothesis stability.
    Hypothesis,
    /// Empirical-error bound from pointwise hypothesis stability.
    Pointwise,
    /// Empirical-error bound from uniform stability.
    Uniform,
}

fn validate_gen_inputs(observed: f64, beta: f64, m_bound: f64, m: usize, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid_param(
            "delta",
            format!("must be in (0,1), got {delta}"),
        ));
    }
    if !(m_bound > 0.0) {
        return Err(Error::invalid_param("M", "loss bound must be > 0"));
    }
    require_nonnegative("beta", beta)?;
    if m == 0 {
        return Err(Error::invalid_param("m", "must be >= 1"));
    }
    if !(0.0..=m_bound).contains(&observed) {
        return Err(Error::invalid_param(
            "observed_error",
            format!("must be in [0, M] = [0, {m_bound}], got {observed}"),
        ));
    }
    Ok(())
}

/// Generalization bound from a stability constant:
/// hypothesis: `R_loo  + sqrt((M^2 +  6 M m beta) / (2 m delta))`;
/// pointwise:  `R_emp  + sqrt((M^2 + 12 M m beta) / (2 m delta))`;
/// uniform:    `R_emp + 2 beta + (4 m beta + M) sqrt(ln(1/delta) / (2 m))`.
pub fn gen_bound(
    kind: GenBoundKind,
    observed_error: f64,
    beta: f64,
    m_bound: f64,
    m: usize,
    delta: f64,
) -> Result<BoundResult> {
    validate_gen_inputs(observed_error, beta, m_bound, m, delta)?;
    let mf = m as f64;
    let (value, formula) = match kind {
        GenBoundKind::Hypothesis => {
            let term =
                ((m_bound * m_bound + 6.0 * m_bound * mf * beta) / (2.0 * mf * delta)).sqrt();
            (observed_error + term, "gen_hypothesis")
        }
        GenBoundKind::Pointwise => {
            let term =
                ((m_bound * m_bound + 12.0 * m_bound * mf * beta) / (2.0 * mf * delta)).sqrt();
            (observed_error + term, "gen_pointwise")
        }
        GenBoundKind::Uniform => {
            let term = (4.0 * mf * beta + m_bound) * ((1.0 / delta).ln() / (2.0 * mf)).sqrt();
            (observed_error + 2.0 * beta + term, "gen_uniform")
        }
    };
    Ok(BoundResult::new(value, formula)
        .input("observed_error", observed_error)
        .input("beta", beta)
        .input("M", m_bound)
        .input("m", m)
        .input("delta", delta))
}

/// Which observed error the subbagging generalization bound starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubbaggingErrorVariant {
    /// Leave-one-out error with hypothesis stability `gamma_p`.
    Loo,
    /// Empirical error with pointwise hypothesis stability `gamma_p'`.
    Emp,
}

/// Subbagging generalization bound:
/// `observed + sqrt((2 M^2 + 12 M B p gamma) / (m delta))`.
#[allow(clippy::too_many_arguments)]
pub fn gen_bound_subbagging(
    variant: SubbaggingErrorVariant,
    observed_error: f64,
    gamma: f64,
    p: usize,
    m: usize,
    m_bound: f64,
    b: f64,
    delta: f64,
) -> Result<BoundResult> {
    validate_gen_inputs(observed_error, gamma, m_bound, m, delta)?;
    if p == 0 || p > m {
        return Err(Error::invalid_param(
            "p",
            format!("must satisfy 1 <= p <= m, got p={p}, m={m}"),
        ));
    }
    require_nonnegative("B", b)?;
    let mf = m as f64;
    let term =
        ((2.0 * m_bound * m_bound + 12.0 * m_bound * b * p as f64 * gamma) / (mf * delta)).sqrt();
    let formula = match variant {
        SubbaggingErrorVariant::Loo => "gen_subbagging_loo",
        SubbaggingErrorVariant::Emp => "gen_subbagging_emp",
    };
    Ok(BoundResult::new(observed_error + term, formula)
        .input("observed_error", observed_error)
        .input("gamma", gamma)
        .input("p", p)
        .input("m", m)
        .input("M", m_bound)
        .input("B", b)
        .input("delta", delta))
}
