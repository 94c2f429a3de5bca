//! The five aggregation functions: SAW, WP, WDI with p = 2 and p = ∞, TOPSIS.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{DecisionMatrix, Stage};
use crate::transform::WeightVector;
use crate::warning::{emit, Warning};

/// Aggregation method, listed in canonical order (used for tie-breaking).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregationMethod {
    Saw,
    Wp,
    Wdi2,
    WdiInf,
    Topsis,
}

impl AggregationMethod {
    pub const ALL: [AggregationMethod; 5] = [
        AggregationMethod::Saw,
        AggregationMethod::Wp,
        AggregationMethod::Wdi2,
        AggregationMethod::WdiInf,
        AggregationMethod::Topsis,
    ];

    /// Display label as used in the output tables.
    pub fn label(self) -> &'static str {
        match self {
            AggregationMethod::Saw => "SAW",
            AggregationMethod::Wp => "WP",
            AggregationMethod::Wdi2 => "WDI2",
            AggregationMethod::WdiInf => "WDIInf",
            AggregationMethod::Topsis => "TOPSIS",
        }
    }

    /// Position in canonical order.
    pub fn rank(self) -> usize {
        self as usize
    }

    /// Accepts the table labels case-insensitively plus `wdi_inf`/`wdi∞`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        Some(match s.as_str() {
            "saw" => AggregationMethod::Saw,
            "wp" => AggregationMethod::Wp,
            "wdi2" => AggregationMethod::Wdi2,
            "wdiinf" | "wdi_inf" | "wdi-inf" | "wdi∞" => AggregationMethod::WdiInf,
            "topsis" => AggregationMethod::Topsis,
            _ => return None,
        })
    }
}

impl fmt::Display for AggregationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-entity composite scores for one year and one method.
#[derive(Debug, Clone, PartialEq)]
pub struct CiVector {
    pub method: AggregationMethod,
    pub scores: Vec<f64>,
}

/// Aggregates a normalized matrix with the given weights.
///
/// Scores are returned unrescaled. For WP, `0^0 = 1`, so a zero cell in a
/// zero-weighted column has no effect. A TOPSIS entity equidistant at zero
/// from both reference points scores 0.5 with a warning.
pub fn aggregate(
    method: AggregationMethod,
    r: &DecisionMatrix,
    w: &WeightVector,
    warnings: &mut Vec<Warning>,
) -> Result<CiVector> {
    r.require_stage(Stage::Normalized)?;
    let n = r.n_cols();
    let w = w.as_slice();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let m = r.n_rows();
    let scores = match method {
        AggregationMethod::Saw => (0..m)
            .map(|i| r.row(i).iter().zip(w).map(|(x, wj)| wj * x).sum())
            .collect(),
        AggregationMethod::Wp => (0..m)
            .map(|i| {
                r.row(i)
                    .iter()
                    .zip(w)
                    .map(|(&x, &wj)| if wj == 0.0 { 1.0 } else { libm::pow(x, wj) })
                    .product()
            })
            .collect(),
        AggregationMethod::Wdi2 => (0..m)
            .map(|i| {
                let ss: f64 = r.row(i).iter().zip(w).map(|(x, wj)| (wj * x) * (wj * x)).sum();
                libm::sqrt(ss)
            })
            .collect(),
        AggregationMethod::WdiInf => (0..m)
            .map(|i| {
                r.row(i)
                    .iter()
                    .zip(w)
                    .map(|(x, wj)| wj * x)
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
        AggregationMethod::Topsis => topsis(r, w, warnings),
    };
    Ok(CiVector { method, scores })
}

fn topsis(r: &DecisionMatrix, w: &[f64], warnings: &mut Vec<Warning>) -> Vec<f64> {
    let (m, n) = (r.n_rows(), r.n_cols());
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for i in 0..m {
        for j in 0..n {
            let v = w[j] * r.get(i, j);
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    (0..m)
        .map(|i| {
            let (mut d_lo, mut d_hi) = (0.0, 0.0);
            for j in 0..n {
                let v = w[j] * r.get(i, j);
                d_lo += (v - lo[j]) * (v - lo[j]);
                d_hi += (v - hi[j]) * (v - hi[j]);
            }
            let (d_lo, d_hi) = (libm::sqrt(d_lo), libm::sqrt(d_hi));
            if d_lo + d_hi == 0.0 {
                emit(
                    warnings,
                    Warning::TopsisDegenerate {
                        entity: r.entities()[i].clone(),
                    },
                );
                0.5
            } else {
                d_lo / (d_lo + d_hi)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::equal_weights;

    fn mat(rows: &[Vec<f64>]) -> DecisionMatrix {
        DecisionMatrix::from_rows(rows, Stage::Normalized).unwrap()
    }

    fn run(method: AggregationMethod, r: &DecisionMatrix, w: &[f64]) -> Vec<f64> {
        aggregate(method, r, &WeightVector::new(w.to_vec()).unwrap(), &mut Vec::new())
            .unwrap()
            .scores
    }

    #[test]
    fn single_criterion_collapse() {
        let r = mat(&[vec![0.2], vec![0.9], vec![0.5]]);
        for m in [
            AggregationMethod::Saw,
            AggregationMethod::Wp,
            AggregationMethod::Wdi2,
            AggregationMethod::WdiInf,
        ] {
            assert_eq!(run(m, &r, &[1.0]), vec![0.2, 0.9, 0.5], "{m}");
        }
        let t = run(AggregationMethod::Topsis, &r, &[1.0]);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 1.0);
        assert!((t[2] - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn wp_zero_cell_zeroes_score() {
        let r = mat(&[vec![0.0, 0.8], vec![0.5, 0.5]]);
        assert_eq!(run(AggregationMethod::Wp, &r, &[0.3, 0.7])[0], 0.0);
        // zero weight makes the zero cell inert
        assert_eq!(run(AggregationMethod::Wp, &r, &[0.0, 1.0])[0], 0.8);
    }

    #[test]
    fn saw_and_wdi2_worked_example() {
        let r = mat(&[vec![1.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(run(AggregationMethod::Saw, &r, &[0.5, 0.5]), vec![1.0, 0.0]);
        let wdi = run(AggregationMethod::Wdi2, &r, &[0.5, 0.5]);
        assert!((wdi[0] - libm::sqrt(0.5)).abs() < 1e-15);
        assert_eq!(wdi[1], 0.0);
    }

    #[test]
    fn wdi_inf_is_min_weighted_cell() {
        let r = mat(&[vec![0.4, 0.9], vec![1.0, 0.1]]);
        let s = run(AggregationMethod::WdiInf, &r, &[0.25, 0.75]);
        assert_eq!(s[0], 0.25 * 0.4);
        assert_eq!(s[1], 0.75 * 0.1);
    }

    #[test]
    fn topsis_ideal_and_anti_ideal() {
        let r = mat(&[vec![1.0, 0.9, 0.7], vec![0.1, 0.2, 0.0], vec![0.5, 0.6, 0.3]]);
        let s = run(AggregationMethod::Topsis, &r, &[0.2, 0.3, 0.5]);
        assert_eq!(s[0], 1.0);
        assert_eq!(s[1], 0.0);
        assert!(s[2] > 0.0 && s[2] < 1.0);
    }

    #[test]
    fn topsis_identical_rows_score_half_with_warning() {
        let r = mat(&[vec![0.3, 0.3], vec![0.3, 0.3]]);
        let mut warns = Vec::new();
        let s = aggregate(AggregationMethod::Topsis, &r, &equal_weights(2), &mut warns).unwrap();
        assert_eq!(s.scores, vec![0.5, 0.5]);
        assert_eq!(warns.len(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let r = mat(&[vec![0.3, 0.3]]);
        let err = aggregate(AggregationMethod::Saw, &r, &equal_weights(3), &mut Vec::new()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn parse_labels() {
        for m in AggregationMethod::ALL {
            assert_eq!(AggregationMethod::parse(m.label()), Some(m));
        }
        assert_eq!(AggregationMethod::parse("wdi_inf"), Some(AggregationMethod::WdiInf));
        assert_eq!(AggregationMethod::parse("electre"), None);
    }
}
