use alloc::string::String;
use core::fmt;

use crate::aggregate::AggregationMethod;

/// Non-fatal conditions where a documented substitution was applied.
///
/// Routines that can degrade gracefully push these into a caller-owned
/// `Vec<Warning>` and also log them at `warn` level.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Global max equals global min; every cell was mapped to 0.5.
    DegenerateRange { indicator: String },
    /// Every coefficient of variation was zero; equal weights were used.
    AllWeightsZero,
    /// Polarity is ignored by the LN and VN normalizations.
    PolarityIgnored { indicator: String },
    /// An entity sits at both the ideal and anti-ideal point; score set to 0.5.
    TopsisDegenerate { entity: String },
    /// A constant (or all-zero) vector entered the information-loss measure;
    /// its term was set to zero.
    ConstantInLoss { what: String },
    /// Two or more methods share the minimum mean loss.
    SelectionTie { chosen: AggregationMethod },
    /// A regressor without within-group variation was dropped.
    DroppedNoWithinVariation { column: String },
    /// A negative variance-component estimate was clamped to zero.
    NegativeVarianceComponent { value: f64 },
    /// The covariance gap was not positive definite; a pseudo-inverse was used.
    SingularCovarianceGap,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DegenerateRange { indicator } => write!(
                f,
                "indicator `{indicator}` has a degenerate range (max = min); cells set to 0.5"
            ),
            Warning::AllWeightsZero => {
                write!(f, "all coefficients of variation are zero; equal weights used")
            }
            Warning::PolarityIgnored { indicator } => write!(
                f,
                "cost indicator `{indicator}` normalized without direction reversal"
            ),
            Warning::TopsisDegenerate { entity } => write!(
                f,
                "TOPSIS distances are both zero for `{entity}`; score set to 0.5"
            ),
            Warning::ConstantInLoss { what } => write!(
                f,
                "constant vector `{what}` in information-loss measure; term set to zero"
            ),
            Warning::SelectionTie { chosen } => write!(
                f,
                "several methods share the minimum mean loss; `{chosen}` chosen by canonical order"
            ),
            Warning::DroppedNoWithinVariation { column } => write!(
                f,
                "regressor `{column}` has no within variation and was dropped"
            ),
            Warning::NegativeVarianceComponent { value } => write!(
                f,
                "negative individual variance estimate {value:e} clamped to zero"
            ),
            Warning::SingularCovarianceGap => write!(
                f,
                "V_FE - V_RE is not positive definite; pseudo-inverse used"
            ),
        }
    }
}

/// Logs and records a warning, skipping exact repeats.
pub(crate) fn emit(sink: &mut alloc::vec::Vec<Warning>, w: Warning) {
    if sink.contains(&w) {
        return;
    }
    log::warn!("{w}");
    sink.push(w);
}
