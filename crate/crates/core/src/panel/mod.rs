//! Panel regression: descriptive statistics, pooled OLS, fixed effects
//! (within), random effects (FGLS with Swamy–Arora variance components),
//! and the Hausman specification test.

mod estimators;
mod hausman;
pub(crate) mod linalg;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::stats;

pub use estimators::{fixed_effects, pooled_ols, random_effects, RandomEffectsOptions};
pub use hausman::{hausman, hausman_statistic, HausmanResult, Recommendation};

/// Name given to the intercept in coefficient tables.
pub const INTERCEPT: &str = "C";

/// Default regressors of the carbon-finance model.
pub const DEFAULT_REGRESSORS: [&str; 5] = ["psi", "patent", "size", "location", "energy"];

/// One observation of an (entity, period) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub entity: String,
    pub year: i32,
    pub response: f64,
    pub regressors: Vec<f64>,
}

/// A balanced or unbalanced panel with named regressors.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSample {
    response: String,
    regressors: Vec<String>,
    rows: Vec<PanelRow>,
}

impl PanelSample {
    pub fn new(response: &str, regressors: Vec<String>, rows: Vec<PanelRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut seen = BTreeSet::new();
        for r in &rows {
            if r.regressors.len() != regressors.len() {
                return Err(Error::DimensionMismatch {
                    expected: regressors.len(),
                    found: r.regressors.len(),
                });
            }
            if !r.response.is_finite() || r.regressors.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue {
                    entity: r.entity.clone(),
                    year: r.year,
                    indicator: response.to_string(),
                });
            }
            if !seen.insert((r.entity.as_str(), r.year)) {
                return Err(Error::DuplicateCell {
                    entity: r.entity.clone(),
                    year: r.year,
                    indicator: response.to_string(),
                });
            }
        }
        Ok(PanelSample {
            response: response.to_string(),
            regressors,
            rows,
        })
    }

    pub fn response_name(&self) -> &str {
        &self.response
    }

    pub fn regressor_names(&self) -> &[String] {
        &self.regressors
    }

    pub fn rows(&self) -> &[PanelRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn regressor_index(&self, name: &str) -> Result<usize> {
        self.regressors
            .iter()
            .position(|r| r == name)
            .ok_or_else(|| Error::UnknownRegressor(name.to_string()))
    }

    /// Values of a named column (the response or a regressor).
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        if name == self.response {
            return Ok(self.rows.iter().map(|r| r.response).collect());
        }
        let j = self.regressor_index(name)?;
        Ok(self.rows.iter().map(|r| r.regressors[j]).collect())
    }
}

/// Dimension along which individual effects are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EffectDimension {
    #[default]
    Entity,
    /// One-way period effects.
    Time,
}

impl EffectDimension {
    pub fn name(self) -> &'static str {
        match self {
            EffectDimension::Entity => "entity",
            EffectDimension::Time => "time",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "entity" | "cross-section" => Some(EffectDimension::Entity),
            "time" | "period" => Some(EffectDimension::Time),
            _ => None,
        }
    }
}

/// Model specification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegressionSpec {
    /// Regressors to include; empty means every regressor in the sample.
    pub regressors: Vec<String>,
    /// Add period dummies (all periods but the first).
    pub time_effects: bool,
    pub effects: EffectDimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Pooled,
    FixedEffects,
    RandomEffects,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Pooled => "Pooled OLS",
            Estimator::FixedEffects => "Fixed effects",
            Estimator::RandomEffects => "Random effects",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `***` below 1%, `**` below 5%, `*` below 10%.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    }
}

/// Table cell of the form `0.775972*** (4.489495)`.
pub fn coefficient_cell(estimate: f64, t_value: f64, p_value: f64) -> String {
    format!("{estimate:.6}{} ({t_value:.6})", significance_stars(p_value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

impl Coefficient {
    pub fn stars(&self) -> &'static str {
        significance_stars(self.p_value)
    }

    pub fn cell(&self) -> String {
        coefficient_cell(self.estimate, self.t_value, self.p_value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceComponents {
    /// Idiosyncratic variance σ²_ε.
    pub sigma2_e: f64,
    /// Individual-effect variance σ²_u (after clamping at zero); `None`
    /// when θ was forced.
    pub sigma2_u: Option<f64>,
    /// Quasi-demeaning weight per group, in group order.
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub std_dev: f64,
}

impl ResidualSummary {
    fn of(resid: &[f64]) -> Self {
        ResidualSummary {
            min: stats::min(resid),
            median: stats::median(resid),
            max: stats::max(resid),
            std_dev: stats::sample_sd(resid),
        }
    }
}

/// Coefficient table and fit statistics for one estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub estimator: Estimator,
    /// Slopes in specification order, then the intercept [`INTERCEPT`].
    pub coefficients: Vec<Coefficient>,
    /// Covariance of the coefficients, in the same order.
    pub covariance: DMatrix<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub f_statistic: Option<f64>,
    pub f_p_value: Option<f64>,
    pub n_obs: usize,
    pub n_groups: usize,
    pub df_resid: usize,
    /// Fixed effects: group label and effect (deviation from the intercept).
    pub effects: Vec<(String, f64)>,
    pub variance_components: Option<VarianceComponents>,
    pub residuals: ResidualSummary,
    /// Regressors removed for lack of within variation.
    pub dropped: Vec<String>,
}

impl RegressionResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    /// Slope estimates (everything except the intercept), in table order.
    pub fn slopes(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .filter(|c| c.name != INTERCEPT)
            .map(|c| c.estimate)
            .collect()
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.coefficients.iter().position(|c| c.name == name)
    }
}

/// Per-variable summary: `(mean, sd, min, median, max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptive {
    pub name: String,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Descriptive {
    pub fn of(name: &str, xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Descriptive {
            name: name.to_string(),
            mean: stats::mean(xs),
            std_dev: stats::sample_sd(xs),
            min: stats::min(xs),
            median: stats::median(xs),
            max: stats::max(xs),
        })
    }
}

/// Descriptive statistics for the response and then every regressor.
pub fn describe(sample: &PanelSample) -> Result<Vec<Descriptive>> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    core::iter::once(sample.response_name())
        .chain(sample.regressor_names().iter().map(String::as_str))
        .map(|name| Descriptive::of(name, &sample.column(name)?))
        .collect()
}

/// Numeric form of a sample under a specification.
#[derive(Debug, Clone)]
pub(crate) struct Design {
    pub names: Vec<String>,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub group: Vec<usize>,
    pub group_labels: Vec<String>,
    pub group_sizes: Vec<usize>,
}

impl Design {
    pub fn build(sample: &PanelSample, spec: &RegressionSpec) -> Result<Self> {
        let names: Vec<String> = if spec.regressors.is_empty() {
            sample.regressor_names().to_vec()
        } else {
            spec.regressors.clone()
        };
        let cols = names
            .iter()
            .map(|n| sample.regressor_index(n))
            .collect::<Result<Vec<_>>>()?;
        let rows = sample.rows();
        let entities: BTreeSet<&str> = rows.iter().map(|r| r.entity.as_str()).collect();
        let years: BTreeSet<i32> = rows.iter().map(|r| r.year).collect();
        if entities.len() < 2 || years.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 entities and 2 periods (got {} and {})",
                entities.len(),
                years.len()
            )));
        }
        let dummy_years: Vec<i32> = if spec.time_effects {
            years.iter().skip(1).copied().collect()
        } else {
            Vec::new()
        };
        let k = cols.len() + dummy_years.len();
        let n = rows.len();
        if n <= k + 2 {
            return Err(Error::InsufficientData(format!("{n} observations for {k} regressors")));
        }

        let mut x = DMatrix::zeros(n, k);
        for (i, r) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                x[(i, c)] = r.regressors[j];
            }
            for (c, &y) in dummy_years.iter().enumerate() {
                x[(i, cols.len() + c)] = if r.year == y { 1.0 } else { 0.0 };
            }
        }
        let y = DVector::from_iterator(n, rows.iter().map(|r| r.response));

        let labels: Vec<String> = match spec.effects {
            EffectDimension::Entity => entities.iter().map(|e| e.to_string()).collect(),
            EffectDimension::Time => years.iter().map(|y| y.to_string()).collect(),
        };
        let index: BTreeMap<String, usize> = labels.iter().enumerate().map(|(g, l)| (l.clone(), g)).collect();
        let group: Vec<usize> = rows
            .iter()
            .map(|r| match spec.effects {
                EffectDimension::Entity => index[r.entity.as_str()],
                EffectDimension::Time => index[&r.year.to_string()],
            })
            .collect();
        let mut group_sizes = alloc::vec![0usize; labels.len()];
        for &g in &group {
            group_sizes[g] += 1;
        }

        let mut all_names = names;
        all_names.extend(dummy_years.iter().map(|y| format!("year_{y}")));
        Ok(Design {
            names: all_names,
            x,
            y,
            group,
            group_labels: labels,
            group_sizes,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.group_labels.len()
    }

    /// Group means of a vector.
    pub fn group_means(&self, v: &DVector<f64>) -> Vec<f64> {
        let mut sums = alloc::vec![0.0; self.n_groups()];
        for (i, &g) in self.group.iter().enumerate() {
            sums[g] += v[i];
        }
        sums.iter().zip(&self.group_sizes).map(|(s, &c)| s / c as f64).collect()
    }
}
