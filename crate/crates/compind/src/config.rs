//! Run configuration (TOML).
//!
//! Relative paths are resolved against the directory holding the config
//! file. The resolved form is echoed into every run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use compind_core::panel::{EffectDimension, RegressionSpec, DEFAULT_REGRESSORS};
use compind_core::{
    AggregationMethod, HierarchySpec, IndicatorSpec, Normalization, PipelineConfig, Polarity, Prep, SsmInput,
    Weighting,
};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dataset: Option<String>,
    entities: Option<Vec<String>>,
    #[serde(default = "default_normalization")]
    normalization: String,
    #[serde(default = "default_weighting")]
    weighting: String,
    candidates: Option<Vec<String>>,
    #[serde(default = "default_ssm_input")]
    ssm_input: String,
    #[serde(default)]
    renormalize_top: bool,
    reference_ranks: Option<Vec<f64>>,
    output_dir: Option<String>,
    #[serde(default)]
    rounding: Rounding,
    hierarchy: Option<RawHierarchy>,
    regression: Option<RawRegression>,
}

fn default_normalization() -> String {
    "maut".into()
}
fn default_weighting() -> String {
    "cv".into()
}
fn default_ssm_input() -> String {
    "raw".into()
}

/// Decimal places per output family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Rounding {
    pub index: usize,
    pub ssm: usize,
    pub regression: usize,
}

impl Default for Rounding {
    fn default() -> Self {
        Rounding {
            index: 3,
            ssm: 4,
            regression: 6,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHierarchy {
    top: String,
    top_label: Option<String>,
    groups: Vec<RawGroup>,
    indicators: Vec<RawIndicator>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    id: String,
    label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIndicator {
    id: String,
    group: String,
    #[serde(default = "default_polarity")]
    polarity: String,
    #[serde(default = "default_prep")]
    prep: String,
    label: Option<String>,
}

fn default_polarity() -> String {
    "benefit".into()
}
fn default_prep() -> String {
    "none".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegression {
    dataset: String,
    #[serde(default = "default_response")]
    response: String,
    regressors: Option<Vec<String>>,
    #[serde(default)]
    time_effects: bool,
    #[serde(default = "default_effects")]
    effects: String,
    #[serde(default = "default_threshold")]
    hausman_threshold: f64,
    #[serde(default = "default_estimator")]
    estimator: String,
    #[serde(default)]
    labels: BTreeMap<String, String>,
}

fn default_response() -> String {
    "cfi".into()
}
fn default_effects() -> String {
    "entity".into()
}
fn default_threshold() -> f64 {
    0.05
}
fn default_estimator() -> String {
    "hausman".into()
}

/// Which regression table `regress` reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorChoice {
    /// Fixed or random effects, whichever the Hausman test favours.
    Hausman,
    Pooled,
    FixedEffects,
    RandomEffects,
}

impl EstimatorChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hausman" => Some(EstimatorChoice::Hausman),
            "pooled" | "ols" => Some(EstimatorChoice::Pooled),
            "fe" | "fixed" | "fixed_effects" => Some(EstimatorChoice::FixedEffects),
            "re" | "random" | "random_effects" => Some(EstimatorChoice::RandomEffects),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EstimatorChoice::Hausman => "hausman",
            EstimatorChoice::Pooled => "pooled",
            EstimatorChoice::FixedEffects => "fe",
            EstimatorChoice::RandomEffects => "re",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegressionConfig {
    pub dataset: PathBuf,
    pub dataset_raw: String,
    pub response: String,
    pub spec: RegressionSpec,
    pub hausman_threshold: f64,
    pub estimator: EstimatorChoice,
    pub labels: BTreeMap<String, String>,
}

impl RegressionConfig {
    /// Display label of a variable: configured label, else a built-in
    /// label for the standard variables, else the id itself.
    pub fn label(&self, id: &str) -> String {
        if let Some(l) = self.labels.get(id) {
            return l.clone();
        }
        match id {
            "cfi" => "CFI",
            "psi" => "PSI",
            "patent" => "Patent",
            "size" => "Size",
            "location" => "Location",
            "energy" => "Energy",
            other => other,
        }
        .to_string()
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub base_dir: PathBuf,
    pub dataset: Option<PathBuf>,
    dataset_raw: Option<String>,
    pub entities: Option<Vec<String>>,
    pub pipeline: PipelineConfig,
    pub hierarchy: Option<HierarchySpec>,
    pub top_label: Option<String>,
    pub output_dir: Option<PathBuf>,
    output_dir_raw: Option<String>,
    pub rounding: Rounding,
    pub regression: Option<RegressionConfig>,
}

fn parse_enum<T>(field: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> AppResult<T> {
    parse(value).ok_or_else(|| AppError::Config(format!("invalid {field} `{value}`")))
}

fn parse_polarity(s: &str) -> Option<Polarity> {
    match s.to_ascii_lowercase().as_str() {
        "benefit" | "positive" | "+" => Some(Polarity::Benefit),
        "cost" | "negative" | "-" => Some(Polarity::Cost),
        _ => None,
    }
}

fn parse_prep(s: &str) -> Option<Prep> {
    match s.to_ascii_lowercase().as_str() {
        "none" => Some(Prep::None),
        "reciprocal" => Some(Prep::Reciprocal),
        _ => None,
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Self::parse(&text, &base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> AppResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
        let resolve = |p: &str| base_dir.join(p);

        let candidates = match &raw.candidates {
            None => AggregationMethod::ALL.to_vec(),
            Some(list) => {
                if list.is_empty() {
                    return Err(AppError::Config("candidates must not be empty".into()));
                }
                let mut out = Vec::new();
                for c in list {
                    let m = parse_enum("aggregation method", c, AggregationMethod::parse)?;
                    if out.contains(&m) {
                        return Err(AppError::Config(format!("duplicate candidate `{c}`")));
                    }
                    out.push(m);
                }
                out
            }
        };
        let pipeline = PipelineConfig {
            normalization: parse_enum("normalization", &raw.normalization, Normalization::parse)?,
            weighting: parse_enum("weighting", &raw.weighting, Weighting::parse)?,
            candidates,
            ssm_input: parse_enum("ssm_input", &raw.ssm_input, SsmInput::parse)?,
            renormalize_top: raw.renormalize_top,
            reference_ranks: raw.reference_ranks.clone(),
        };
        if let Some(r0) = &pipeline.reference_ranks {
            if r0.iter().any(|v| !v.is_finite()) {
                return Err(AppError::Config("reference_ranks must be finite".into()));
            }
        }

        let (hierarchy, top_label) = match &raw.hierarchy {
            None => (None, None),
            Some(h) => (Some(build_hierarchy(h)?), h.top_label.clone()),
        };

        let regression = match &raw.regression {
            None => None,
            Some(r) => {
                if !(r.hausman_threshold > 0.0 && r.hausman_threshold < 1.0) {
                    return Err(AppError::Config(format!(
                        "hausman_threshold must lie in (0, 1), got {}",
                        r.hausman_threshold
                    )));
                }
                Some(RegressionConfig {
                    dataset: resolve(&r.dataset),
                    dataset_raw: r.dataset.clone(),
                    response: r.response.clone(),
                    spec: RegressionSpec {
                        regressors: r
                            .regressors
                            .clone()
                            .unwrap_or_else(|| DEFAULT_REGRESSORS.iter().map(|s| s.to_string()).collect()),
                        time_effects: r.time_effects,
                        effects: parse_enum("effects", &r.effects, EffectDimension::parse)?,
                    },
                    hausman_threshold: r.hausman_threshold,
                    estimator: parse_enum("estimator", &r.estimator, EstimatorChoice::parse)?,
                    labels: r.labels.clone(),
                })
            }
        };

        Ok(RunConfig {
            base_dir: base_dir.to_path_buf(),
            dataset: raw.dataset.as_deref().map(resolve),
            dataset_raw: raw.dataset.clone(),
            entities: raw.entities.clone(),
            pipeline,
            hierarchy,
            top_label,
            output_dir: raw.output_dir.as_deref().map(resolve),
            output_dir_raw: raw.output_dir.clone(),
            rounding: raw.rounding,
            regression,
        })
    }

    pub fn require_hierarchy(&self) -> AppResult<&HierarchySpec> {
        self.hierarchy
            .as_ref()
            .ok_or_else(|| AppError::Config("missing [hierarchy] section".into()))
    }

    pub fn require_dataset(&self) -> AppResult<&Path> {
        self.dataset
            .as_deref()
            .ok_or_else(|| AppError::Config("missing `dataset`".into()))
    }

    pub fn require_regression(&self) -> AppResult<&RegressionConfig> {
        self.regression
            .as_ref()
            .ok_or_else(|| AppError::Config("missing [regression] section".into()))
    }

    /// Output directory: the command-line override, else `output_dir`.
    pub fn output_dir(&self, cli: Option<&Path>) -> AppResult<PathBuf> {
        cli.map(Path::to_path_buf)
            .or_else(|| self.output_dir.clone())
            .ok_or_else(|| AppError::Config("no output directory: pass --out or set output_dir".into()))
    }

    /// Canonical form of the settings, as recorded in manifests. Paths are
    /// kept as written so the manifest does not depend on the working
    /// directory.
    pub fn resolved(&self) -> ResolvedConfig {
        ResolvedConfig {
            dataset: self.dataset_raw.clone(),
            entities: self.entities.clone(),
            normalization: self.pipeline.normalization.name().into(),
            weighting: self.pipeline.weighting.name().into(),
            candidates: self.pipeline.candidates.iter().map(|m| m.label().to_string()).collect(),
            ssm_input: self.pipeline.ssm_input.name().into(),
            renormalize_top: self.pipeline.renormalize_top,
            reference_ranks: self.pipeline.reference_ranks.clone(),
            output_dir: self.output_dir_raw.clone(),
            rounding: self.rounding,
            hierarchy: self.hierarchy.as_ref().map(|h| ResolvedHierarchy {
                top: h.top().to_string(),
                top_label: self.top_label.clone(),
                groups: h
                    .groups()
                    .iter()
                    .map(|g| ResolvedGroup {
                        id: g.id.clone(),
                        label: g.label.clone(),
                        members: g.members.clone(),
                    })
                    .collect(),
                indicators: h
                    .indicators()
                    .iter()
                    .map(|s| ResolvedIndicator {
                        id: s.id.clone(),
                        label: s.label.clone(),
                        group: s.group.clone(),
                        polarity: match s.polarity {
                            Polarity::Benefit => "benefit",
                            Polarity::Cost => "cost",
                        }
                        .into(),
                        prep: match s.prep {
                            Prep::None => "none",
                            Prep::Reciprocal => "reciprocal",
                        }
                        .into(),
                    })
                    .collect(),
            }),
            regression: self.regression.as_ref().map(|r| ResolvedRegression {
                dataset: r.dataset_raw.clone(),
                response: r.response.clone(),
                regressors: r.spec.regressors.clone(),
                time_effects: r.spec.time_effects,
                effects: r.spec.effects.name().into(),
                hausman_threshold: r.hausman_threshold,
                estimator: r.estimator.name().into(),
                labels: r.labels.clone(),
            }),
        }
    }
}

fn build_hierarchy(h: &RawHierarchy) -> AppResult<HierarchySpec> {
    let mut indicators = Vec::with_capacity(h.indicators.len());
    for i in &h.indicators {
        let spec = IndicatorSpec::new(
            &i.id,
            &i.group,
            parse_enum("polarity", &i.polarity, parse_polarity)?,
            parse_enum("prep", &i.prep, parse_prep)?,
        );
        indicators.push(match &i.label {
            Some(l) => spec.with_label(l),
            None => spec,
        });
    }
    let groups: Vec<(&str, &str)> = h
        .groups
        .iter()
        .map(|g| (g.id.as_str(), g.label.as_deref().unwrap_or(g.id.as_str())))
        .collect();
    HierarchySpec::new(indicators, &groups, &h.top).map_err(|e| AppError::Config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub dataset: Option<String>,
    pub entities: Option<Vec<String>>,
    pub normalization: String,
    pub weighting: String,
    pub candidates: Vec<String>,
    pub ssm_input: String,
    pub renormalize_top: bool,
    pub reference_ranks: Option<Vec<f64>>,
    pub output_dir: Option<String>,
    pub rounding: Rounding,
    pub hierarchy: Option<ResolvedHierarchy>,
    pub regression: Option<ResolvedRegression>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedHierarchy {
    pub top: String,
    pub top_label: Option<String>,
    pub groups: Vec<ResolvedGroup>,
    pub indicators: Vec<ResolvedIndicator>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedGroup {
    pub id: String,
    pub label: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedIndicator {
    pub id: String,
    pub label: String,
    pub group: String,
    pub polarity: String,
    pub prep: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedRegression {
    pub dataset: String,
    pub response: String,
    pub regressors: Vec<String>,
    pub time_effects: bool,
    pub effects: String,
    pub hausman_threshold: f64,
    pub estimator: String,
    pub labels: BTreeMap<String, String>,
}
