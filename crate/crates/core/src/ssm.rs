//! Shannon–Spearman information-loss scoring of aggregation methods.
//!
//! For a decision matrix with columns `x_j`, weights `w_j` and a composite
//! vector `CI`, the loss is
//!
//! ```text
//! d = | Σ_j w_j · D(p_j) · ρ(x_j, r0)  −  D(p_CI) · ρ(CI, r0) |
//! ```
//!
//! where `p` are column shares, `D(p) = 1 + (1/ln m) Σ p ln p` is one minus
//! the normalized Shannon entropy and `ρ` is Spearman's rank correlation
//! against a reference ranking `r0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::aggregate::{aggregate, AggregationMethod, CiVector};
use crate::error::{Error, Result};
use crate::model::DecisionMatrix;
use crate::transform::WeightVector;
use crate::warning::{emit, Warning};

const SIMPLEX_TOL: f64 = 1e-9;

/// Column-wise shares `x_ij / Σ_i x_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareMatrix {
    columns: Vec<Vec<f64>>,
}

impl ShareMatrix {
    pub fn from_matrix(mat: &DecisionMatrix) -> Result<Self> {
        let columns = (0..mat.n_cols())
            .map(|j| shares(&mat.column(j)).map_err(|e| relabel(e, mat, j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShareMatrix { columns })
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }
}

fn relabel(e: Error, mat: &DecisionMatrix, j: usize) -> Error {
    match e {
        Error::NegativeCell { row, .. } => Error::NegativeCell {
            column: mat.indicators()[j].clone(),
            row,
        },
        other => other,
    }
}

/// Shares of a nonnegative vector with positive sum.
pub fn shares(x: &[f64]) -> Result<Vec<f64>> {
    if let Some(row) = x.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeCell {
            column: String::new(),
            row,
        });
    }
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroSum);
    }
    Ok(x.iter().map(|v| v / total).collect())
}

/// `1 + (1/ln m) Σ p_i ln p_i` with `0 ln 0 = 0`; 0 for uniform, 1 for a point mass.
pub fn diversity_factor(p: &[f64]) -> Result<f64> {
    let m = p.len();
    if m < 2 {
        return Err(Error::TooFewEntities(m));
    }
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&v| !(v >= 0.0) || v > 1.0 + SIMPLEX_TOL) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotASimplex);
    }
    let plogp: f64 = p.iter().filter(|&&v| v > 0.0).map(|&v| v * libm::log(v)).sum();
    Ok((1.0 + plogp / libm::log(m as f64)).clamp(0.0, 1.0))
}

/// 1-based ranks, ties receiving the average of the positions they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && x[idx[end]] == x[idx[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &idx[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::TooFewEntities(a.len()));
    }
    Ok(())
}

/// Spearman's rho as the Pearson correlation of average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ZeroRankVariance);
    }
    Ok((sab / libm::sqrt(saa * sbb)).clamp(-1.0, 1.0))
}

/// `1 - 6 Σ d² / (n (n² - 1))`. Valid only without ties; returns
/// [`Error::ZeroRankVariance`] if either input has a tie.
pub fn spearman_rank_difference(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    if has_ties(&ra) || has_ties(&rb) {
        return Err(Error::ZeroRankVariance);
    }
    let n = ra.len() as f64;
    let d2: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

fn has_ties(ranks: &[f64]) -> bool {
    let mut v = ranks.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|w| w[0] == w[1])
}

/// Default reference ranking `(m, m-1, …, 1)`.
pub fn reference_ranks(m: usize) -> Vec<f64> {
    (0..m).rev().map(|k| (k + 1) as f64).collect()
}

fn is_constant(x: &[f64]) -> bool {
    x.windows(2).all(|w| w[0] == w[1])
}

/// `D(p(x)) · ρ(x, r0)`, with a constant vector contributing zero.
fn information_term(x: &[f64], r0: &[f64], what: &str, warnings: &mut Vec<Warning>) -> Result<f64> {
    if let Some(row) = x.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeCell {
            column: what.into(),
            row,
        });
    }
    if is_constant(x) {
        emit(warnings, Warning::ConstantInLoss { what: what.into() });
        return Ok(0.0);
    }
    let p = shares(x)?;
    Ok(diversity_factor(&p)? * spearman(x, r0)?)
}

/// Information loss `d ≥ 0` between a matrix and its composite vector.
///
/// A constant column (or constant CI) carries neither entropy contrast nor
/// rank information; its term is taken as zero with a warning.
pub fn ssm_loss(
    mat: &DecisionMatrix,
    w: &WeightVector,
    ci: &CiVector,
    r0: &[f64],
    warnings: &mut Vec<Warning>,
) -> Result<f64> {
    let (m, n) = (mat.n_rows(), mat.n_cols());
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    if ci.scores.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: ci.scores.len(),
        });
    }
    if r0.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: r0.len(),
        });
    }
    let mut indicator_side = 0.0;
    for (j, wj) in w.as_slice().iter().enumerate() {
        let term = information_term(&mat.column(j), r0, &mat.indicators()[j], warnings)?;
        indicator_side += wj * term;
    }
    let ci_side = information_term(&ci.scores, r0, &format!("CI[{}]", ci.method), warnings)?;
    Ok((indicator_side - ci_side).abs())
}

/// One year's inputs to method evaluation.
#[derive(Debug, Clone)]
pub struct YearInput {
    pub year: i32,
    /// Matrix whose shares and ranks enter the loss (raw or normalized).
    pub loss_matrix: DecisionMatrix,
    /// Normalized matrix fed to the aggregation.
    pub normalized: DecisionMatrix,
    pub weights: WeightVector,
}

/// Losses per method and year, their means, and the selected method.
#[derive(Debug, Clone, PartialEq)]
pub struct SsmReport {
    pub methods: Vec<AggregationMethod>,
    pub years: Vec<i32>,
    /// `losses[k][t]` for method `k`, year `t`.
    pub losses: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub selected: AggregationMethod,
}

impl SsmReport {
    /// Computes means and the minimum-mean selection from a loss grid.
    pub fn from_losses(
        methods: Vec<AggregationMethod>,
        years: Vec<i32>,
        losses: Vec<Vec<f64>>,
        warnings: &mut Vec<Warning>,
    ) -> Result<Self> {
        if methods.is_empty() {
            return Err(Error::NoMethods);
        }
        if years.is_empty() {
            return Err(Error::NoYears);
        }
        let means: Vec<f64> = losses
            .iter()
            .map(|row| row.iter().sum::<f64>() / row.len() as f64)
            .collect();
        let k = select_min_mean(&methods, &means, warnings)?;
        Ok(SsmReport {
            selected: methods[k],
            methods,
            years,
            losses,
            means,
        })
    }

    pub fn mean_of(&self, method: AggregationMethod) -> Option<f64> {
        self.methods.iter().position(|&m| m == method).map(|k| self.means[k])
    }
}

/// Index of the smallest mean; ties go to the earliest method in canonical
/// order (then to the earliest position) with a warning.
pub fn select_min_mean(methods: &[AggregationMethod], means: &[f64], warnings: &mut Vec<Warning>) -> Result<usize> {
    if methods.is_empty() {
        return Err(Error::NoMethods);
    }
    if methods.len() != means.len() {
        return Err(Error::LengthMismatch(methods.len(), means.len()));
    }
    let best = means.iter().copied().fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..means.len()).filter(|&k| means[k] == best).collect();
    let chosen = *tied
        .iter()
        .min_by_key(|&&k| (methods[k].rank(), k))
        .ok_or(Error::NoMethods)?;
    if tied.len() > 1 {
        emit(
            warnings,
            Warning::SelectionTie {
                chosen: methods[chosen],
            },
        );
    }
    Ok(chosen)
}

/// Scores every method on every year and selects the minimum mean loss.
///
/// `r0` defaults to [`reference_ranks`] of the entity count.
pub fn evaluate_methods(
    inputs: &[YearInput],
    methods: &[AggregationMethod],
    r0: Option<&[f64]>,
    warnings: &mut Vec<Warning>,
) -> Result<SsmReport> {
    if inputs.is_empty() {
        return Err(Error::NoYears);
    }
    if methods.is_empty() {
        return Err(Error::NoMethods);
    }
    let mut losses = vec![Vec::with_capacity(inputs.len()); methods.len()];
    for input in inputs {
        let default_r0;
        let r0 = match r0 {
            Some(r) => r,
            None => {
                default_r0 = reference_ranks(input.normalized.n_rows());
                &default_r0
            }
        };
        for (k, &method) in methods.iter().enumerate() {
            let ci = aggregate(method, &input.normalized, &input.weights, warnings)?;
            losses[k].push(ssm_loss(&input.loss_matrix, &input.weights, &ci, r0, warnings)?);
        }
    }
    SsmReport::from_losses(
        methods.to_vec(),
        inputs.iter().map(|i| i.year).collect(),
        losses,
        warnings,
    )
}
