//! Two-level index construction: normalize → weight → aggregate each group,
//! select the aggregation method by minimum information loss, then repeat
//! weighting and aggregation over the group scores to obtain the top index.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::aggregate::{aggregate, AggregationMethod};
use crate::error::{Error, Result};
use crate::model::{apply_prep, slice_year, DecisionMatrix, HierarchySpec, PanelDataset, Polarity, Stage};
use crate::ssm::{evaluate_methods, select_min_mean, SsmReport, YearInput};
use crate::stats;
use crate::transform::{global_extrema, normalize, weights, Normalization, Weighting};
use crate::warning::Warning;

/// Which matrix supplies shares and ranks to the information-loss measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SsmInput {
    /// Prepped raw values (after the reciprocal transform, before normalization).
    #[default]
    Raw,
    Normalized,
}

impl SsmInput {
    pub fn name(self) -> &'static str {
        match self {
            SsmInput::Raw => "raw",
            SsmInput::Normalized => "normalized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Some(SsmInput::Raw),
            "normalized" => Some(SsmInput::Normalized),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub normalization: Normalization,
    pub weighting: Weighting,
    pub candidates: Vec<AggregationMethod>,
    pub ssm_input: SsmInput,
    /// Min–max rescale group scores before the top-level aggregation.
    pub renormalize_top: bool,
    /// Reference ranking; `(m, m-1, …, 1)` when `None`.
    pub reference_ranks: Option<Vec<f64>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            normalization: Normalization::Maut,
            weighting: Weighting::Cv,
            candidates: AggregationMethod::ALL.to_vec(),
            ssm_input: SsmInput::Raw,
            renormalize_top: false,
            reference_ranks: None,
        }
    }
}

/// Composite scores on a complete entity × year grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSeries {
    pub name: String,
    entities: Vec<String>,
    years: Vec<i32>,
    values: Vec<f64>,
    pub method: AggregationMethod,
}

impl IndexSeries {
    /// `values` is entity-major: `values[e * years.len() + t]`.
    pub fn new(
        name: &str,
        entities: Vec<String>,
        years: Vec<i32>,
        values: Vec<f64>,
        method: AggregationMethod,
    ) -> Result<Self> {
        if values.len() != entities.len() * years.len() {
            return Err(Error::DimensionMismatch {
                expected: entities.len() * years.len(),
                found: values.len(),
            });
        }
        if entities.is_empty() || years.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(k) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonFiniteValue {
                entity: entities[k / years.len()].clone(),
                year: years[k % years.len()],
                indicator: name.to_string(),
            });
        }
        Ok(IndexSeries {
            name: name.to_string(),
            entities,
            years,
            values,
            method,
        })
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn get(&self, entity: usize, year: usize) -> f64 {
        self.values[entity * self.years.len() + year]
    }

    pub fn row(&self, entity: usize) -> &[f64] {
        let t = self.years.len();
        &self.values[entity * t..(entity + 1) * t]
    }

    pub fn column(&self, year: usize) -> Vec<f64> {
        (0..self.entities.len()).map(|e| self.get(e, year)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn same_grid(&self, other: &IndexSeries) -> bool {
        self.entities == other.entities && self.years == other.years
    }
}

/// Regional (per-entity) and period (per-year) summaries of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    /// Mean over years, per entity.
    pub regional_average: Vec<f64>,
    /// Mean over entities, per year.
    pub period_average: Vec<f64>,
    /// Sample standard deviation over entities, per year.
    pub period_sd: Vec<f64>,
    pub grand_mean: f64,
}

pub fn summarize(series: &IndexSeries) -> SummaryTable {
    let regional_average = (0..series.entities.len())
        .map(|e| stats::mean(series.row(e)))
        .collect();
    let (period_average, period_sd) = (0..series.years.len())
        .map(|t| {
            let col = series.column(t);
            (stats::mean(&col), stats::sample_sd(&col))
        })
        .unzip();
    SummaryTable {
        regional_average,
        period_average,
        period_sd,
        grand_mean: stats::mean(&series.values),
    }
}

/// Per-year normalized matrices, weights and loss matrices for one group.
///
/// `ds` must already be prepped.
pub fn group_year_inputs(
    ds: &PanelDataset,
    members: &[String],
    config: &PipelineConfig,
    warnings: &mut Vec<Warning>,
) -> Result<Vec<YearInput>> {
    let sub = ds.select_indicators(members)?;
    let ext = global_extrema(&sub);
    let polarity: Vec<Polarity> = sub.indicators().iter().map(|s| s.polarity).collect();
    sub.years()
        .iter()
        .map(|&year| {
            let raw = slice_year(&sub, year)?;
            let normalized = normalize(config.normalization, &raw, &ext, &polarity, warnings)?;
            let weights = weights(config.weighting, &normalized, warnings)?;
            let loss_matrix = match config.ssm_input {
                SsmInput::Raw => raw,
                SsmInput::Normalized => normalized.clone(),
            };
            Ok(YearInput {
                year,
                loss_matrix,
                normalized,
                weights,
            })
        })
        .collect()
}

fn series_from_inputs(
    name: &str,
    ds: &PanelDataset,
    inputs: &[YearInput],
    method: AggregationMethod,
    warnings: &mut Vec<Warning>,
) -> Result<IndexSeries> {
    let (m, t) = (ds.n_entities(), inputs.len());
    let mut values = vec![0.0; m * t];
    for (k, input) in inputs.iter().enumerate() {
        let ci = aggregate(method, &input.normalized, &input.weights, warnings)?;
        for (e, s) in ci.scores.iter().enumerate() {
            values[e * t + k] = *s;
        }
    }
    IndexSeries::new(name, ds.entities().to_vec(), ds.years().to_vec(), values, method)
}

/// Index for one group under a fixed aggregation method. `ds` must be prepped.
pub fn build_group_index(
    ds: &PanelDataset,
    hierarchy: &HierarchySpec,
    group: &str,
    method: AggregationMethod,
    config: &PipelineConfig,
    warnings: &mut Vec<Warning>,
) -> Result<IndexSeries> {
    let g = hierarchy.group(group)?;
    let inputs = group_year_inputs(ds, &g.members, config, warnings)?;
    series_from_inputs(&g.id, ds, &inputs, method, warnings)
}

/// Scores every candidate on one group and builds the index with the
/// minimum-loss method. `ds` must be prepped.
pub fn select_and_build(
    ds: &PanelDataset,
    hierarchy: &HierarchySpec,
    group: &str,
    config: &PipelineConfig,
    warnings: &mut Vec<Warning>,
) -> Result<(IndexSeries, SsmReport)> {
    let g = hierarchy.group(group)?;
    let inputs = group_year_inputs(ds, &g.members, config, warnings)?;
    let report = evaluate_methods(&inputs, &config.candidates, config.reference_ranks.as_deref(), warnings)?;
    let series = series_from_inputs(&g.id, ds, &inputs, report.selected, warnings)?;
    Ok((series, report))
}

/// Aggregates group series into the top-level index.
///
/// Group scores are treated as benefit indicators already on `[0, 1]`;
/// with `config.renormalize_top` they are first min–max rescaled against
/// their pooled extrema.
pub fn build_top_index(
    name: &str,
    groups: &[IndexSeries],
    method: AggregationMethod,
    config: &PipelineConfig,
    warnings: &mut Vec<Warning>,
) -> Result<IndexSeries> {
    let first = groups.first().ok_or(Error::GridMismatch)?;
    if groups.iter().any(|g| !g.same_grid(first)) {
        return Err(Error::GridMismatch);
    }
    let (m, t, k) = (first.entities.len(), first.years.len(), groups.len());
    let extrema: Vec<(f64, f64)> = groups
        .iter()
        .map(|g| (stats::min(&g.values), stats::max(&g.values)))
        .collect();
    let ids: Vec<String> = groups.iter().map(|g| g.name.clone()).collect();
    let mut values = vec![0.0; m * t];
    for year in 0..t {
        let mut cells = Vec::with_capacity(m * k);
        for e in 0..m {
            for (g, &(lo, hi)) in groups.iter().zip(&extrema) {
                let v = g.get(e, year);
                cells.push(if !config.renormalize_top {
                    v
                } else if hi > lo {
                    (v - lo) / (hi - lo)
                } else {
                    0.5
                });
            }
        }
        let mat = DecisionMatrix::new(first.entities.clone(), ids.clone(), Stage::Normalized, cells)?;
        let w = weights(config.weighting, &mat, warnings)?;
        let ci = aggregate(method, &mat, &w, warnings)?;
        for (e, s) in ci.scores.iter().enumerate() {
            values[e * t + year] = *s;
        }
    }
    IndexSeries::new(name, first.entities.clone(), first.years.clone(), values, method)
}

/// Everything produced by a full two-level run.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexRun {
    /// Per-group information-loss reports, in hierarchy order.
    pub reports: Vec<SsmReport>,
    /// Candidate means averaged over groups.
    pub pooled_means: Vec<f64>,
    pub selected: AggregationMethod,
    /// Group series under the selected method, in hierarchy order.
    pub groups: Vec<IndexSeries>,
    pub top: IndexSeries,
}

/// Full construction from an unprepped dataset.
///
/// The method is selected once, from candidate mean losses averaged over
/// all groups, and used at both levels. `pooled_override` replaces those
/// averaged means (one per candidate) when supplied.
pub fn build_index(
    ds: &PanelDataset,
    hierarchy: &HierarchySpec,
    config: &PipelineConfig,
    pooled_override: Option<&[f64]>,
    warnings: &mut Vec<Warning>,
) -> Result<IndexRun> {
    if config.candidates.is_empty() {
        return Err(Error::NoMethods);
    }
    let prepped = apply_prep(ds)?;
    let mut inputs = Vec::with_capacity(hierarchy.groups().len());
    let mut reports = Vec::with_capacity(hierarchy.groups().len());
    for g in hierarchy.groups() {
        let yi = group_year_inputs(&prepped, &g.members, config, warnings)?;
        reports.push(evaluate_methods(
            &yi,
            &config.candidates,
            config.reference_ranks.as_deref(),
            warnings,
        )?);
        inputs.push(yi);
    }
    let pooled_means: Vec<f64> = match pooled_override {
        Some(means) => {
            if means.len() != config.candidates.len() {
                return Err(Error::LengthMismatch(config.candidates.len(), means.len()));
            }
            means.to_vec()
        }
        None => (0..config.candidates.len())
            .map(|k| reports.iter().map(|r| r.means[k]).sum::<f64>() / reports.len() as f64)
            .collect(),
    };
    let selected = config.candidates[select_min_mean(&config.candidates, &pooled_means, warnings)?];
    let groups = hierarchy
        .groups()
        .iter()
        .zip(&inputs)
        .map(|(g, yi)| series_from_inputs(&g.id, &prepped, yi, selected, warnings))
        .collect::<Result<Vec<_>>>()?;
    let top = build_top_index(hierarchy.top(), &groups, selected, config, warnings)?;
    Ok(IndexRun {
        reports,
        pooled_means,
        selected,
        groups,
        top,
    })
}
