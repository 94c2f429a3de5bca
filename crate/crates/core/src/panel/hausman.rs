use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::linalg::{spd_inverse, sym_pinv};
use super::{RegressionResult, INTERCEPT};
use crate::dist;
use crate::error::{Error, Result};
use crate::warning::{emit, Warning};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recommendation {
    FixedEffects,
    RandomEffects,
}

impl Recommendation {
    pub fn label(self) -> &'static str {
        match self {
            Recommendation::FixedEffects => "fixed effects",
            Recommendation::RandomEffects => "random effects",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HausmanResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub recommendation: Recommendation,
    /// Slopes compared, in FE order.
    pub coefficients: Vec<String>,
}

/// `dᵀ G⁻¹ d`, falling back to the pseudo-inverse (with a warning) when the
/// gap `G` is not positive definite. Never negative.
pub fn hausman_statistic(diff: &DVector<f64>, gap: &DMatrix<f64>, warnings: &mut Vec<Warning>) -> f64 {
    if diff.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let inv = match spd_inverse(gap) {
        Some(inv) => inv,
        None => {
            emit(warnings, Warning::SingularCovarianceGap);
            sym_pinv(gap)
        }
    };
    diff.dot(&(inv * diff)).max(0.0)
}

/// Hausman test on the slopes common to both fits (intercept excluded).
///
/// Random effects is recommended when the p-value exceeds `threshold`.
pub fn hausman(
    fe: &RegressionResult,
    re: &RegressionResult,
    threshold: f64,
    warnings: &mut Vec<Warning>,
) -> Result<HausmanResult> {
    let common: Vec<(usize, usize)> = fe
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| c.name != INTERCEPT)
        .filter_map(|(i, c)| re.index_of(&c.name).map(|j| (i, j)))
        .collect();
    if common.is_empty() {
        return Err(Error::NoCommonCoefficients);
    }
    let k = common.len();
    let diff = DVector::from_iterator(
        k,
        common
            .iter()
            .map(|&(i, j)| fe.coefficients[i].estimate - re.coefficients[j].estimate),
    );
    let gap = DMatrix::from_fn(k, k, |a, b| {
        let (fa, ra) = common[a];
        let (fb, rb) = common[b];
        fe.covariance[(fa, fb)] - re.covariance[(ra, rb)]
    });
    let statistic = hausman_statistic(&diff, &gap, warnings);
    let p_value = dist::chi2_sf(statistic, k as f64);
    Ok(HausmanResult {
        statistic,
        df: k,
        p_value,
        recommendation: if p_value > threshold {
            Recommendation::RandomEffects
        } else {
            Recommendation::FixedEffects
        },
        coefficients: common.iter().map(|&(i, _)| fe.coefficients[i].name.clone()).collect(),
    })
}
