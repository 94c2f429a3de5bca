//! Normalization (linear, vector, global min–max) and coefficient-of-variation
//! weighting.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{DecisionMatrix, PanelDataset, Polarity, Stage};
use crate::stats;
use crate::warning::{emit, Warning};

const SIMPLEX_TOL: f64 = 1e-9;

/// Per-indicator maximum and minimum pooled over all entities and years.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalExtrema {
    indicators: Vec<String>,
    max: Vec<f64>,
    min: Vec<f64>,
}

impl GlobalExtrema {
    pub fn new(indicators: Vec<String>, max: Vec<f64>, min: Vec<f64>) -> Result<Self> {
        if max.len() != indicators.len() || min.len() != indicators.len() {
            return Err(Error::DimensionMismatch {
                expected: indicators.len(),
                found: max.len().min(min.len()),
            });
        }
        for (j, id) in indicators.iter().enumerate() {
            if !(max[j].is_finite() && min[j].is_finite()) || max[j] < min[j] {
                return Err(Error::OutsideExtrema {
                    column: id.clone(),
                    value: min[j],
                });
            }
        }
        Ok(GlobalExtrema { indicators, max, min })
    }

    /// `(max, min)` for an indicator id.
    pub fn get(&self, id: &str) -> Option<(f64, f64)> {
        self.indicators
            .iter()
            .position(|s| s == id)
            .map(|j| (self.max[j], self.min[j]))
    }

    pub fn indicators(&self) -> &[String] {
        &self.indicators
    }
}

pub fn global_extrema(ds: &PanelDataset) -> GlobalExtrema {
    let n = ds.n_indicators();
    let mut max = vec![f64::NEG_INFINITY; n];
    let mut min = vec![f64::INFINITY; n];
    for j in 0..n {
        for x in ds.indicator_values(j) {
            max[j] = max[j].max(x);
            min[j] = min[j].min(x);
        }
    }
    GlobalExtrema {
        indicators: ds.indicators().iter().map(|s| s.id.clone()).collect(),
        max,
        min,
    }
}

/// Min–max normalization against global extrema.
///
/// Benefit columns map to `(x - min) / (max - min)`, cost columns to
/// `(max - x) / (max - min)`. A column whose extrema coincide maps to 0.5
/// and raises [`Warning::DegenerateRange`].
pub fn normalize_maut(
    mat: &DecisionMatrix,
    ext: &GlobalExtrema,
    polarity: &[Polarity],
    warnings: &mut Vec<Warning>,
) -> Result<DecisionMatrix> {
    let (m, n) = (mat.n_rows(), mat.n_cols());
    if polarity.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: polarity.len(),
        });
    }
    let mut cells = vec![0.0; m * n];
    for j in 0..n {
        let id = &mat.indicators()[j];
        let (hi, lo) = ext.get(id).ok_or_else(|| Error::UnknownIndicator(id.clone()))?;
        let range = hi - lo;
        if range == 0.0 {
            emit(warnings, Warning::DegenerateRange { indicator: id.clone() });
        }
        for i in 0..m {
            let x = mat.get(i, j);
            if x < lo || x > hi {
                return Err(Error::OutsideExtrema {
                    column: id.clone(),
                    value: x,
                });
            }
            cells[i * n + j] = if range == 0.0 {
                0.5
            } else {
                match polarity[j] {
                    Polarity::Benefit => (x - lo) / range,
                    Polarity::Cost => (hi - x) / range,
                }
            };
        }
    }
    Ok(mat.with_cells(Stage::Normalized, cells))
}

fn require_nonnegative(mat: &DecisionMatrix) -> Result<()> {
    for j in 0..mat.n_cols() {
        for i in 0..mat.n_rows() {
            if mat.get(i, j) < 0.0 {
                return Err(Error::NegativeCell {
                    column: mat.indicators()[j].clone(),
                    row: i,
                });
            }
        }
    }
    Ok(())
}

/// Linear normalization: each cell divided by its column maximum.
pub fn normalize_ln(mat: &DecisionMatrix) -> Result<DecisionMatrix> {
    require_nonnegative(mat)?;
    let (m, n) = (mat.n_rows(), mat.n_cols());
    let mut cells = vec![0.0; m * n];
    for j in 0..n {
        let col_max = stats::max(&mat.column(j));
        if col_max <= 0.0 {
            return Err(Error::NonPositiveColumnMax(mat.indicators()[j].clone()));
        }
        for i in 0..m {
            cells[i * n + j] = mat.get(i, j) / col_max;
        }
    }
    Ok(mat.with_cells(Stage::Normalized, cells))
}

/// Vector normalization: each column divided by its Euclidean norm.
pub fn normalize_vn(mat: &DecisionMatrix) -> Result<DecisionMatrix> {
    require_nonnegative(mat)?;
    let (m, n) = (mat.n_rows(), mat.n_cols());
    let mut cells = vec![0.0; m * n];
    for j in 0..n {
        let norm = libm::sqrt(mat.column(j).iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::ZeroColumn(mat.indicators()[j].clone()));
        }
        for i in 0..m {
            cells[i * n + j] = (mat.get(i, j) / norm).min(1.0);
        }
    }
    Ok(mat.with_cells(Stage::Normalized, cells))
}

/// Per-indicator weights for one year, on the unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidWeights { sum });
        }
        Ok(WeightVector { weights })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Coefficient-of-variation weights.
///
/// For each column (fixed indicator, fixed year) `V = sd / mean` across
/// entities, with the sample standard deviation; weights are `V / ΣV`.
pub fn cv_weights(mat: &DecisionMatrix, warnings: &mut Vec<Warning>) -> Result<WeightVector> {
    mat.require_stage(Stage::Normalized)?;
    let m = mat.n_rows();
    if m < 2 {
        return Err(Error::SingleEntity(m));
    }
    let mut cv = Vec::with_capacity(mat.n_cols());
    for j in 0..mat.n_cols() {
        let col = mat.column(j);
        let mean = stats::mean(&col);
        if mean <= 0.0 {
            return Err(Error::ZeroMeanColumn(mat.indicators()[j].clone()));
        }
        cv.push(stats::sample_sd(&col) / mean);
    }
    let total: f64 = cv.iter().sum();
    if total == 0.0 {
        emit(warnings, Warning::AllWeightsZero);
        return Ok(equal_weights(mat.n_cols()));
    }
    Ok(WeightVector {
        weights: cv.into_iter().map(|v| v / total).collect(),
    })
}

/// `n` weights of `1 / n` each.
pub fn equal_weights(n: usize) -> WeightVector {
    assert!(n >= 1, "equal_weights needs at least one indicator");
    WeightVector {
        weights: vec![1.0 / n as f64; n],
    }
}

/// Normalization scheme applied to each yearly cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    Ln,
    Vn,
    #[default]
    Maut,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Ln => "ln",
            Normalization::Vn => "vn",
            Normalization::Maut => "maut",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ln" => Some(Normalization::Ln),
            "vn" => Some(Normalization::Vn),
            "maut" => Some(Normalization::Maut),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    Cv,
    Equal,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::Cv => "cv",
            Weighting::Equal => "equal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cv" => Some(Weighting::Cv),
            "equal" => Some(Weighting::Equal),
            _ => None,
        }
    }
}

/// Dispatches to the configured normalization. LN and VN ignore polarity
/// and warn once per cost column.
pub fn normalize(
    scheme: Normalization,
    mat: &DecisionMatrix,
    ext: &GlobalExtrema,
    polarity: &[Polarity],
    warnings: &mut Vec<Warning>,
) -> Result<DecisionMatrix> {
    match scheme {
        Normalization::Maut => normalize_maut(mat, ext, polarity, warnings),
        Normalization::Ln | Normalization::Vn => {
            for (id, p) in mat.indicators().iter().zip(polarity) {
                if *p == Polarity::Cost {
                    emit(warnings, Warning::PolarityIgnored { indicator: id.to_string() });
                }
            }
            if scheme == Normalization::Ln {
                normalize_ln(mat)
            } else {
                normalize_vn(mat)
            }
        }
    }
}

pub fn weights(scheme: Weighting, normalized: &DecisionMatrix, warnings: &mut Vec<Warning>) -> Result<WeightVector> {
    match scheme {
        Weighting::Cv => cv_weights(normalized, warnings),
        Weighting::Equal => Ok(equal_weights(normalized.n_cols())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IndicatorSpec, Prep};

    fn col_matrix(cols: &[&[f64]], stage: Stage) -> DecisionMatrix {
        let m = cols[0].len();
        let rows: Vec<Vec<f64>> = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        DecisionMatrix::from_rows(&rows, stage).unwrap()
    }

    fn ext_for(mat: &DecisionMatrix) -> GlobalExtrema {
        let n = mat.n_cols();
        let max = (0..n).map(|j| stats::max(&mat.column(j))).collect();
        let min = (0..n).map(|j| stats::min(&mat.column(j))).collect();
        GlobalExtrema::new(mat.indicators().to_vec(), max, min).unwrap()
    }

    #[test]
    fn extrema_of_single_indicator() {
        let spec = vec![IndicatorSpec::new("x", "g", Polarity::Benefit, Prep::None)];
        let ds = PanelDataset::new(vec!["a".into(), "b".into(), "c".into()], vec![2015], spec.clone(), vec![2.0, 5.0, 9.0])
            .unwrap();
        assert_eq!(global_extrema(&ds).get("x"), Some((9.0, 2.0)));
        let ds = PanelDataset::new(vec!["a".into(), "b".into(), "c".into()], vec![2015], spec, vec![4.0; 3]).unwrap();
        assert_eq!(global_extrema(&ds).get("x"), Some((4.0, 4.0)));
    }

    #[test]
    fn maut_endpoints_and_interior() {
        let mat = col_matrix(&[&[2.0, 5.0, 9.0], &[2.0, 5.0, 9.0]], Stage::Raw);
        let ext = ext_for(&mat);
        let mut w = Vec::new();
        let out = normalize_maut(&mat, &ext, &[Polarity::Benefit, Polarity::Cost], &mut w).unwrap();
        assert_eq!(out.column(0), vec![0.0, 3.0 / 7.0, 1.0]);
        assert_eq!(out.get(0, 1), 1.0);
        assert_eq!(out.get(2, 1), 0.0);
        assert_eq!(out.stage(), Stage::Normalized);
        assert!(w.is_empty());
    }

    #[test]
    fn maut_degenerate_column_maps_to_half() {
        let mat = col_matrix(&[&[4.0, 4.0, 4.0]], Stage::Raw);
        let mut w = Vec::new();
        let out = normalize_maut(&mat, &ext_for(&mat), &[Polarity::Benefit], &mut w).unwrap();
        assert_eq!(out.column(0), vec![0.5; 3]);
        assert_eq!(w, vec![Warning::DegenerateRange { indicator: "c0".into() }]);
    }

    #[test]
    fn maut_rejects_value_outside_extrema() {
        let mat = col_matrix(&[&[1.0, 10.0]], Stage::Raw);
        let ext = GlobalExtrema::new(vec!["c0".into()], vec![5.0], vec![0.0]).unwrap();
        assert!(matches!(
            normalize_maut(&mat, &ext, &[Polarity::Benefit], &mut Vec::new()),
            Err(Error::OutsideExtrema { .. })
        ));
    }

    #[test]
    fn ln_examples() {
        let out = normalize_ln(&col_matrix(&[&[2.0, 5.0, 10.0], &[3.0, 3.0, 3.0]], Stage::Raw)).unwrap();
        assert_eq!(out.column(0), vec![0.2, 0.5, 1.0]);
        assert_eq!(out.column(1), vec![1.0; 3]);
        let err = normalize_ln(&col_matrix(&[&[0.0, 0.0]], Stage::Raw)).unwrap_err();
        assert_eq!(err, Error::NonPositiveColumnMax("c0".into()));
    }

    #[test]
    fn vn_examples() {
        let out = normalize_vn(&col_matrix(&[&[3.0, 4.0]], Stage::Raw)).unwrap();
        assert!((out.get(0, 0) - 0.6).abs() < 1e-15 && (out.get(1, 0) - 0.8).abs() < 1e-15);
        let out = normalize_vn(&col_matrix(&[&[1.0, 0.0, 0.0]], Stage::Raw)).unwrap();
        assert_eq!(out.column(0), vec![1.0, 0.0, 0.0]);
        let err = normalize_vn(&col_matrix(&[&[0.0, 0.0]], Stage::Raw)).unwrap_err();
        assert_eq!(err, Error::ZeroColumn("c0".into()));
    }

    #[test]
    fn cv_constant_column_gets_zero_weight() {
        let mat = col_matrix(&[&[0.3, 0.3, 0.3], &[0.1, 0.5, 0.9]], Stage::Normalized);
        let w = cv_weights(&mat, &mut Vec::new()).unwrap();
        assert_eq!(w.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn cv_identical_columns_split_evenly() {
        let c: &[f64] = &[0.1, 0.4, 0.8];
        let w = cv_weights(&col_matrix(&[c, c, c], Stage::Normalized), &mut Vec::new()).unwrap();
        for x in w.as_slice() {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cv_worked_example() {
        // Independent spreadsheet-style evaluation: means 0.4 and 0.2,
        // sample sds 0.2 and sqrt(0.03), V = 0.5 and sqrt(0.75).
        let v1 = 0.2 / 0.4;
        let v2 = (((0.1f64 - 0.2).powi(2) * 2.0 + (0.4f64 - 0.2).powi(2)) / 2.0).sqrt() / 0.2;
        let expect = [v1 / (v1 + v2), v2 / (v1 + v2)];
        assert!((expect[0] - 0.366025).abs() < 1e-6 && (expect[1] - 0.633975).abs() < 1e-6);

        let mat = col_matrix(&[&[0.2, 0.4, 0.6], &[0.1, 0.1, 0.4]], Stage::Normalized);
        let w = cv_weights(&mat, &mut Vec::new()).unwrap();
        assert!((w.as_slice()[0] - expect[0]).abs() < 1e-12);
        assert!((w.as_slice()[1] - expect[1]).abs() < 1e-12);
    }

    #[test]
    fn cv_errors() {
        let mat = col_matrix(&[&[0.0, 0.0], &[0.1, 0.2]], Stage::Normalized);
        assert_eq!(cv_weights(&mat, &mut Vec::new()), Err(Error::ZeroMeanColumn("c0".into())));
        let mat = col_matrix(&[&[0.5]], Stage::Normalized);
        assert_eq!(cv_weights(&mat, &mut Vec::new()), Err(Error::SingleEntity(1)));
        let raw = col_matrix(&[&[0.5, 0.2]], Stage::Raw);
        assert!(matches!(cv_weights(&raw, &mut Vec::new()), Err(Error::WrongStage { .. })));
    }

    #[test]
    fn cv_all_constant_falls_back_to_equal() {
        let mat = col_matrix(&[&[0.5, 0.5], &[0.2, 0.2]], Stage::Normalized);
        let mut warns = Vec::new();
        let w = cv_weights(&mat, &mut warns).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 0.5]);
        assert_eq!(warns, vec![Warning::AllWeightsZero]);
    }

    #[test]
    fn equal_weight_examples() {
        assert_eq!(equal_weights(4).as_slice(), &[0.25; 4]);
        assert_eq!(equal_weights(1).as_slice(), &[1.0]);
        for n in [3usize, 7, 113, 10_000] {
            let s: f64 = equal_weights(n).as_slice().iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.5, -0.5]).is_err());
        assert!(WeightVector::new(vec![0.25, 0.75]).is_ok());
    }
}
