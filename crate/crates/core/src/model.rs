//! Panel-data domain types, the two-level indicator hierarchy, and the
//! data-preparation transforms applied before normalization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Direction of an indicator: larger is better (`Benefit`) or worse (`Cost`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Benefit,
    Cost,
}

/// Transform applied to raw values before normalization.
///
/// Independent of [`Polarity`]: an indicator may be stored as a reciprocal
/// and still be flagged as a cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Prep {
    #[default]
    None,
    Reciprocal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSpec {
    pub id: String,
    pub label: String,
    pub polarity: Polarity,
    /// Id of the parent sub-index.
    pub group: String,
    pub prep: Prep,
}

impl IndicatorSpec {
    pub fn new(id: &str, group: &str, polarity: Polarity, prep: Prep) -> Self {
        IndicatorSpec {
            id: id.to_string(),
            label: id.to_string(),
            polarity,
            group: group.to_string(),
            prep,
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub id: String,
    pub label: String,
    pub members: Vec<String>,
}

/// Indicators → groups → top index. Exactly two levels.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchySpec {
    groups: Vec<GroupSpec>,
    top: String,
    indicators: Vec<IndicatorSpec>,
}

impl HierarchySpec {
    /// Builds a hierarchy from indicator specs grouped by their `group` field.
    ///
    /// `groups` is the ordered list of `(id, label)`; group members keep the
    /// order in which their indicators appear in `indicators`.
    pub fn new(indicators: Vec<IndicatorSpec>, groups: &[(&str, &str)], top: &str) -> Result<Self> {
        let groups = groups
            .iter()
            .map(|(id, label)| GroupSpec {
                id: id.to_string(),
                label: label.to_string(),
                members: indicators
                    .iter()
                    .filter(|s| s.group == *id)
                    .map(|s| s.id.clone())
                    .collect(),
            })
            .collect();
        Self::from_parts(indicators, groups, top)
    }

    /// Builds a hierarchy from explicit group member lists, checking that the
    /// lists agree with each indicator's `group` field.
    pub fn from_parts(indicators: Vec<IndicatorSpec>, groups: Vec<GroupSpec>, top: &str) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for s in &indicators {
            if !ids.insert(s.id.as_str()) {
                return Err(Error::InvalidHierarchy(format!("duplicate indicator id `{}`", s.id)));
            }
        }
        let mut group_ids = BTreeSet::new();
        let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
        for g in &groups {
            if !group_ids.insert(g.id.as_str()) {
                return Err(Error::InvalidHierarchy(format!("duplicate group id `{}`", g.id)));
            }
            if g.members.is_empty() {
                return Err(Error::InvalidHierarchy(format!("group `{}` is empty", g.id)));
            }
            for m in &g.members {
                let spec = indicators
                    .iter()
                    .find(|s| &s.id == m)
                    .ok_or_else(|| Error::UnknownIndicator(m.clone()))?;
                if spec.group != g.id {
                    return Err(Error::InvalidHierarchy(format!(
                        "indicator `{m}` declares group `{}` but is listed under `{}`",
                        spec.group, g.id
                    )));
                }
                if let Some(prev) = seen.insert(m.as_str(), g.id.as_str()) {
                    return Err(Error::InvalidHierarchy(format!(
                        "indicator `{m}` listed in both `{prev}` and `{}`",
                        g.id
                    )));
                }
            }
        }
        for s in &indicators {
            if !seen.contains_key(s.id.as_str()) {
                return Err(Error::InvalidHierarchy(format!(
                    "indicator `{}` belongs to no group",
                    s.id
                )));
            }
        }
        // canonical order: group order, then member order
        let ordered = groups
            .iter()
            .flat_map(|g| g.members.iter())
            .map(|m| indicators.iter().find(|s| &s.id == m).cloned().unwrap())
            .collect();
        Ok(HierarchySpec {
            groups,
            top: top.to_string(),
            indicators: ordered,
        })
    }

    pub fn groups(&self) -> &[GroupSpec] {
        &self.groups
    }

    pub fn group(&self, id: &str) -> Result<&GroupSpec> {
        self.groups
            .iter()
            .find(|g| g.id == id)
            .ok_or_else(|| Error::UnknownGroup(id.to_string()))
    }

    pub fn top(&self) -> &str {
        &self.top
    }

    /// Indicators in canonical (group, member) order.
    pub fn indicators(&self) -> &[IndicatorSpec] {
        &self.indicators
    }
}

/// One long-format input row.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub entity: String,
    pub year: i32,
    pub indicator: String,
    pub value: f64,
}

impl RawRecord {
    pub fn new(entity: &str, year: i32, indicator: &str, value: f64) -> Self {
        RawRecord {
            entity: entity.to_string(),
            year,
            indicator: indicator.to_string(),
            value,
        }
    }
}

/// Dense entities × indicators × years panel of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    entities: Vec<String>,
    years: Vec<i32>,
    indicators: Vec<IndicatorSpec>,
    values: Vec<f64>,
}

impl PanelDataset {
    /// `values` is laid out entity-major, then indicator, then year.
    pub fn new(
        entities: Vec<String>,
        years: Vec<i32>,
        indicators: Vec<IndicatorSpec>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let (m, n, t) = (entities.len(), indicators.len(), years.len());
        if m == 0 || n == 0 || t == 0 {
            return Err(Error::EmptyDataset);
        }
        if values.len() != m * n * t {
            return Err(Error::DimensionMismatch {
                expected: m * n * t,
                found: values.len(),
            });
        }
        let ds = PanelDataset {
            entities,
            years,
            indicators,
            values,
        };
        for i in 0..m {
            for j in 0..n {
                for k in 0..t {
                    if !ds.value(i, j, k).is_finite() {
                        return Err(ds.cell_error(i, j, k, CellErr::NonFinite));
                    }
                }
            }
        }
        Ok(ds)
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn indicators(&self) -> &[IndicatorSpec] {
        &self.indicators
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_indicators(&self) -> usize {
        self.indicators.len()
    }

    pub fn n_years(&self) -> usize {
        self.years.len()
    }

    #[inline]
    fn offset(&self, entity: usize, indicator: usize, year: usize) -> usize {
        (entity * self.indicators.len() + indicator) * self.years.len() + year
    }

    /// Value at (entity index, indicator index, year index).
    #[inline]
    pub fn value(&self, entity: usize, indicator: usize, year: usize) -> f64 {
        self.values[self.offset(entity, indicator, year)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn year_index(&self, year: i32) -> Result<usize> {
        self.years
            .iter()
            .position(|&y| y == year)
            .ok_or(Error::UnknownYear(year))
    }

    pub fn indicator_index(&self, id: &str) -> Result<usize> {
        self.indicators
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| Error::UnknownIndicator(id.to_string()))
    }

    /// All values of one indicator, pooled over entities and years.
    pub fn indicator_values(&self, indicator: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_entities())
            .flat_map(move |i| (0..self.n_years()).map(move |t| self.value(i, indicator, t)))
    }

    /// Restricts the panel to the given indicators, in the given order.
    pub fn select_indicators<S: AsRef<str>>(&self, ids: &[S]) -> Result<PanelDataset> {
        let idx = ids
            .iter()
            .map(|id| self.indicator_index(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(self.n_entities() * idx.len() * self.n_years());
        for i in 0..self.n_entities() {
            for &j in &idx {
                for t in 0..self.n_years() {
                    values.push(self.value(i, j, t));
                }
            }
        }
        Ok(PanelDataset {
            entities: self.entities.clone(),
            years: self.years.clone(),
            indicators: idx.iter().map(|&j| self.indicators[j].clone()).collect(),
            values,
        })
    }

    fn cell_error(&self, i: usize, j: usize, t: usize, kind: CellErr) -> Error {
        let entity = self.entities[i].clone();
        let year = self.years[t];
        let indicator = self.indicators[j].id.clone();
        match kind {
            CellErr::NonFinite => Error::NonFiniteValue {
                entity,
                year,
                indicator,
            },
            CellErr::NonPositive => Error::NonPositiveReciprocal {
                entity,
                year,
                indicator,
            },
        }
    }
}

enum CellErr {
    NonFinite,
    NonPositive,
}

/// Processing stage of a [`DecisionMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Raw,
    Normalized,
    Weighted,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::Normalized => "normalized",
            Stage::Weighted => "weighted",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One year's entities × indicators matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    entities: Vec<String>,
    indicators: Vec<String>,
    stage: Stage,
    cells: Vec<f64>,
}

impl DecisionMatrix {
    /// Checks shape, finiteness, and the `[0, 1]` range for normalized matrices.
    pub fn new(entities: Vec<String>, indicators: Vec<String>, stage: Stage, cells: Vec<f64>) -> Result<Self> {
        let expected = entities.len() * indicators.len();
        if cells.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: cells.len(),
            });
        }
        let n = indicators.len();
        for (k, &c) in cells.iter().enumerate() {
            let (row, col) = (k / n, k % n);
            if !c.is_finite() {
                return Err(Error::NonFiniteValue {
                    entity: entities[row].clone(),
                    year: 0,
                    indicator: indicators[col].clone(),
                });
            }
            if stage == Stage::Normalized && !(0.0..=1.0).contains(&c) {
                return Err(Error::OutsideExtrema {
                    column: indicators[col].clone(),
                    value: c,
                });
            }
        }
        Ok(Self::from_parts(entities, indicators, stage, cells))
    }

    pub(crate) fn from_parts(entities: Vec<String>, indicators: Vec<String>, stage: Stage, cells: Vec<f64>) -> Self {
        DecisionMatrix {
            entities,
            indicators,
            stage,
            cells,
        }
    }

    /// Convenience constructor from nested rows with generated ids `e0..`, `c0..`.
    pub fn from_rows(rows: &[Vec<f64>], stage: Stage) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let entities = (0..m).map(|i| format!("e{i}")).collect();
        let indicators = (0..n).map(|j| format!("c{j}")).collect();
        let mut cells = Vec::with_capacity(m * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            cells.extend_from_slice(r);
        }
        Self::new(entities, indicators, stage, cells)
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn indicators(&self) -> &[String] {
        &self.indicators
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn n_rows(&self) -> usize {
        self.entities.len()
    }

    pub fn n_cols(&self) -> usize {
        self.indicators.len()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.indicators.len() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.indicators.len();
        &self.cells[row * n..(row + 1) * n]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|i| self.get(i, col)).collect()
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Same labels, new cells and stage.
    pub(crate) fn with_cells(&self, stage: Stage, cells: Vec<f64>) -> Self {
        debug_assert_eq!(cells.len(), self.cells.len());
        Self::from_parts(self.entities.clone(), self.indicators.clone(), stage, cells)
    }

    pub(crate) fn require_stage(&self, expected: Stage) -> Result<()> {
        if self.stage != expected {
            return Err(Error::WrongStage {
                expected: expected.name(),
                found: self.stage.name(),
            });
        }
        Ok(())
    }
}

/// Assembles a dense panel from long-format records.
///
/// Indicator order follows the hierarchy; entity order follows
/// `entity_order` when supplied and is lexicographic otherwise; years are
/// ascending. The result does not depend on record order.
pub fn validate_dataset(
    records: &[RawRecord],
    hierarchy: &HierarchySpec,
    entity_order: Option<&[String]>,
) -> Result<PanelDataset> {
    let specs = hierarchy.indicators();
    let ind_pos: BTreeMap<&str, usize> = specs.iter().enumerate().map(|(j, s)| (s.id.as_str(), j)).collect();

    let entities: Vec<String> = match entity_order {
        Some(order) => order.to_vec(),
        None => records
            .iter()
            .map(|r| r.entity.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let ent_pos: BTreeMap<&str, usize> = entities.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let years: Vec<i32> = records.iter().map(|r| r.year).collect::<BTreeSet<_>>().into_iter().collect();
    if entities.is_empty() || years.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let year_pos: BTreeMap<i32, usize> = years.iter().enumerate().map(|(t, &y)| (y, t)).collect();

    let (m, n, t) = (entities.len(), specs.len(), years.len());
    let mut values = alloc::vec![f64::NAN; m * n * t];
    let mut filled = alloc::vec![false; m * n * t];

    // Sort first so that the reported error is independent of input order.
    let mut sorted: Vec<&RawRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (a.entity.as_str(), a.year, a.indicator.as_str()).cmp(&(b.entity.as_str(), b.year, b.indicator.as_str()))
    });
    for r in sorted {
        let j = *ind_pos
            .get(r.indicator.as_str())
            .ok_or_else(|| Error::UnknownIndicator(r.indicator.clone()))?;
        let i = *ent_pos
            .get(r.entity.as_str())
            .ok_or_else(|| Error::UnknownEntity(r.entity.clone()))?;
        let k = year_pos[&r.year];
        if !r.value.is_finite() {
            return Err(Error::NonFiniteValue {
                entity: r.entity.clone(),
                year: r.year,
                indicator: r.indicator.clone(),
            });
        }
        let off = (i * n + j) * t + k;
        if filled[off] {
            return Err(Error::DuplicateCell {
                entity: r.entity.clone(),
                year: r.year,
                indicator: r.indicator.clone(),
            });
        }
        filled[off] = true;
        values[off] = r.value;
    }
    for i in 0..m {
        for k in 0..t {
            for j in 0..n {
                if !filled[(i * n + j) * t + k] {
                    return Err(Error::MissingCell {
                        entity: entities[i].clone(),
                        year: years[k],
                        indicator: specs[j].id.clone(),
                    });
                }
            }
        }
    }
    Ok(PanelDataset {
        entities,
        years,
        indicators: specs.to_vec(),
        values,
    })
}

/// Replaces every `Reciprocal` indicator's cells with `1 / x`.
pub fn apply_prep(ds: &PanelDataset) -> Result<PanelDataset> {
    let mut out = ds.clone();
    for (j, spec) in ds.indicators.iter().enumerate() {
        if spec.prep != Prep::Reciprocal {
            continue;
        }
        for i in 0..ds.n_entities() {
            for t in 0..ds.n_years() {
                let x = ds.value(i, j, t);
                if x <= 0.0 {
                    return Err(ds.cell_error(i, j, t, CellErr::NonPositive));
                }
                let off = out.offset(i, j, t);
                out.values[off] = 1.0 / x;
            }
        }
    }
    Ok(out)
}

/// The raw cross-section for one year.
pub fn slice_year(ds: &PanelDataset, year: i32) -> Result<DecisionMatrix> {
    let t = ds.year_index(year)?;
    let (m, n) = (ds.n_entities(), ds.n_indicators());
    let mut cells = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            cells.push(ds.value(i, j, t));
        }
    }
    Ok(DecisionMatrix::from_parts(
        ds.entities.clone(),
        ds.indicators.iter().map(|s| s.id.clone()).collect(),
        Stage::Raw,
        cells,
    ))
}
