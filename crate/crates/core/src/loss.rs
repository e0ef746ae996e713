//! Loss functions.
//!
//! Three kinds: squared loss for regression, 0/1 classification loss, and
//! the margin-sensitive gamma loss. The classification and gamma losses
//! treat the prediction as a real-valued score for a binary task with
//! labels in {-1, +1}.
//!
//! A prediction of exactly 0 counts as a misclassification for both classes
//! under the 0/1 loss, so the loss is defined everywhere (the sign(0) rule).
//! Upper bounds: the 0/1 and gamma losses are bounded by 1; the squared
//! loss has no intrinsic bound, so bound calculators take `M` explicitly
//! (the CLI derives a default from the data at hand and reports it).

use serde::{Deserialize, Serialize};

use crate::data::Example;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LossKind {
    Squared,
    Classification01,
    Gamma { gamma: f64 },
}

impl LossKind {
    /// Margin-sensitive loss with margin scale `gamma > 0`.
    pub fn gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::invalid_param(
                "gamma",
                format!("must be > 0, got {gamma}"),
            ));
        }
        Ok(LossKind::Gamma { gamma })
    }

    pub fn name(&self) -> &'static str {
        match self {
            LossKind::Squared => "squared",
            LossKind::Classification01 => "classification01",
            LossKind::Gamma { .. } => "gamma",
        }
    }

    /// Known upper bound on loss values: 1 for the classification and gamma
    /// losses, none intrinsic for the squared loss.
    pub fn intrinsic_bound(&self) -> Option<f64> {
        match self {
            LossKind::Squared => None,
            LossKind::Classification01 | LossKind::Gamma { .. } => Some(1.0),
        }
    }

    fn check_binary_label(&self, y: f64) -> Result<()> {
        if y != -1.0 && y != 1.0 {
            return Err(Error::LossTaskMismatch {
                loss: self.name(),
                label: y,
            });
        }
        Ok(())
    }
}

/// Loss of prediction `f(x)` on example `z = (x, y)`.
pub fn loss(kind: &LossKind, prediction: f64, example: &Example) -> Result<f64> {
    let y = example.y;
    match *kind {
        LossKind::Squared => {
            let r = y - prediction;
            Ok(r * r)
        }
        LossKind::Classification01 => {
            kind.check_binary_label(y)?;
            Ok(if y * prediction <= 0.0 { 1.0 } else { 0.0 })
        }
        LossKind::Gamma { gamma } => {
            if !(gamma > 0.0) {
                return Err(Error::invalid_param(
                    "gamma",
                    format!("must be > 0, got {gamma}"),
                ));
            }
            kind.check_binary_label(y)?;
            let margin = y * prediction;
            Ok(if margin < 0.0 {
                1.0
            } else if margin <= gamma {
                1.0 - margin / gamma
            } else {
                0.0
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(y: f64) -> Example {
        Example::new(vec![0.0], y)
    }

    #[test]
    fn squared_loss_arithmetic() {
        assert_eq!(loss(&LossKind::Squared, 0.5, &ex(2.0)).unwrap(), 2.25);
        assert_eq!(loss(&LossKind::Squared, 2.0, &ex(2.0)).unwrap(), 0.0);
    }

    // Middle branch of the gamma loss: 0 <= y f(x) <= gamma.
    #[test]
    fn gamma_middle_branch() {
        let g = LossKind::gamma(2.0).unwrap();
        assert_eq!(loss(&g, 1.0, &ex(1.0)).unwrap(), 0.5);
    }

    #[test]
    fn negative_margin_gives_full_loss() {
        let g = LossKind::gamma(1.0).unwrap();
        assert_eq!(loss(&g, -0.3, &ex(1.0)).unwrap(), 1.0);
        assert_eq!(
            loss(&LossKind::Classification01, -0.3, &ex(1.0)).unwrap(),
            1.0
        );
    }

    #[test]
    fn sign_zero_counts_as_misclassification_for_both_classes() {
        assert_eq!(
            loss(&LossKind::Classification01, 0.0, &ex(1.0)).unwrap(),
            1.0
        );
        assert_eq!(
            loss(&LossKind::Classification01, 0.0, &ex(-1.0)).unwrap(),
            1.0
        );
    }

    #[test]
    fn classification_requires_binary_labels() {
        let err = loss(&LossKind::Classification01, 0.5, &ex(2.0));
        assert!(matches!(err, Err(Error::LossTaskMismatch { .. })));
    }

    #[test]
    fn gamma_constructor_rejects_nonpositive() {
        assert!(LossKind::gamma(0.0).is_err());
        assert!(LossKind::gamma(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn zero_one_loss_is_zero_or_one(pred in -10.0f64..10.0, y in prop::bool::ANY) {
            let y = if y { 1.0 } else { -1.0 };
            let l = loss(&LossKind::Classification01, pred, &ex(y)).unwrap();
            prop_assert!(l == 0.0 || l == 1.0);
        }

        #[test]
        fn gamma_loss_in_unit_interval(pred in -10.0f64..10.0, y in prop::bool::ANY, g in 0.01f64..5.0) {
            let y = if y { 1.0 } else { -1.0 };
            let l = loss(&LossKind::gamma(g).unwrap(), pred, &ex(y)).unwrap();
            prop_assert!((0.0..=1.0).contains(&l));
        }

        // The gamma loss upper-bounds the 0/1 loss whenever y f(x) != 0.
        #[test]
        fn gamma_dominates_zero_one(pred in -10.0f64..10.0, y in prop::bool::ANY, g in 0.01f64..5.0) {
            let y = if y { 1.0 } else { -1.0 };
            prop_assume!(y * pred != 0.0);
            let lg = loss(&LossKind::gamma(g).unwrap(), pred, &ex(y)).unwrap();
            let l01 = loss(&LossKind::Classification01, pred, &ex(y)).unwrap();
            prop_assert!(lg >= l01);
        }
    }
}
