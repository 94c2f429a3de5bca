use std::path::Path;

use compind_core::panel::{
    describe, fixed_effects, hausman, pooled_ols, random_effects, EffectDimension, HausmanResult, PanelSample,
    RandomEffectsOptions, RegressionResult, INTERCEPT,
};
use compind_core::Warning;
use serde::Serialize;

use crate::config::{EstimatorChoice, RegressionConfig, ResolvedConfig, RunConfig};
use crate::error::AppResult;
use crate::format::{coefficient_cell, fixed, width8, Table};
use crate::ingest::read_regression_sample;
use crate::output::OutputSet;

pub fn describe_table(sample: &PanelSample, rc: &RegressionConfig) -> AppResult<Table> {
    let mut t = Table::new([
        "Variables",
        "Mean value",
        "Standard deviation",
        "Minimum value",
        "Median",
        "Maximum value",
    ]);
    for d in describe(sample)? {
        t.push([
            rc.label(&d.name),
            width8(d.mean),
            width8(d.std_dev),
            width8(d.min),
            width8(d.median),
            width8(d.max),
        ]);
    }
    Ok(t)
}

pub fn hausman_table(h: &HausmanResult, effects: EffectDimension) -> Table {
    let mut t = Table::new(["Test Summary", "Chi-Sq. Statistic", "Chi-Sq. d.f.", "Prob."]);
    let label = match effects {
        EffectDimension::Entity => "Cross-section random",
        EffectDimension::Time => "Period random",
    };
    t.push([
        label.to_string(),
        fixed(h.statistic, 6),
        h.df.to_string(),
        fixed(h.p_value, 4),
    ]);
    t
}

pub fn regression_table(r: &RegressionResult, rc: &RegressionConfig, decimals: usize) -> Table {
    let mut t = Table::new(["Variable".to_string(), rc.label(&rc.response)]);
    for c in &r.coefficients {
        let name = if c.name == INTERCEPT { INTERCEPT.to_string() } else { rc.label(&c.name) };
        t.push([name, coefficient_cell(c.estimate, c.t_value, c.p_value, decimals)]);
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| fixed(v, decimals));
    t.push(["R-squared".to_string(), fixed(r.r_squared, decimals)]);
    t.push(["Adjusted R-squared".to_string(), fixed(r.adj_r_squared, decimals)]);
    t.push(["F-statistic".to_string(), opt(r.f_statistic)]);
    t.push(["Prob(F-statistic)".to_string(), opt(r.f_p_value)]);
    t
}

fn regression_text(r: &RegressionResult, rc: &RegressionConfig, decimals: usize) -> String {
    let mut s = format!(
        "Dependent variable: {}\nEstimator: {}\nObservations: {}  Groups: {}  Residual d.f.: {}\n",
        rc.label(&rc.response),
        r.estimator,
        r.n_obs,
        r.n_groups,
        r.df_resid
    );
    if !r.dropped.is_empty() {
        s.push_str(&format!("Dropped: {}\n", r.dropped.join(", ")));
    }
    s.push('\n');
    s.push_str(&regression_table(r, rc, decimals).to_aligned());
    s.push_str("\nNotes: *, **, *** mark significance at 10%, 5% and 1%; t-values in parentheses.\n");
    s
}

#[derive(Debug, Serialize)]
struct HausmanEntry {
    statistic: f64,
    df: usize,
    p_value: f64,
    recommendation: String,
    coefficients: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RegressManifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: ResolvedConfig,
    n_obs: usize,
    n_groups: usize,
    estimator: String,
    hausman: Option<HausmanEntry>,
    hausman_error: Option<String>,
    outputs: Vec<String>,
    warnings: Vec<String>,
}

/// Renders `describe.csv`, `hausman.txt`, `regression.txt`,
/// `regression.csv` and the manifest.
pub fn render(cfg: &RunConfig) -> AppResult<(OutputSet, RegressionResult)> {
    let rc = cfg.require_regression()?;
    let sample = read_regression_sample(&rc.dataset, &rc.response, &rc.spec.regressors)?;
    let spec = &rc.spec;
    let mut warnings: Vec<Warning> = Vec::new();
    let mut test = || -> compind_core::Result<(RegressionResult, RegressionResult, HausmanResult)> {
        let fe = fixed_effects(&sample, spec, &mut warnings)?;
        let re = random_effects(&sample, spec, RandomEffectsOptions::default(), &mut warnings)?;
        let h = hausman(&fe, &re, rc.hausman_threshold, &mut warnings)?;
        Ok((fe, re, h))
    };
    let tested = test();

    let (chosen, h) = match rc.estimator {
        EstimatorChoice::Hausman => {
            let (fe, re, h) = tested?;
            let pick = match h.recommendation {
                compind_core::panel::Recommendation::RandomEffects => re,
                compind_core::panel::Recommendation::FixedEffects => fe,
            };
            (pick, Ok(h))
        }
        other => {
            let h = tested.map(|(_, _, h)| h);
            let r = match other {
                EstimatorChoice::Pooled => pooled_ols(&sample, spec)?,
                EstimatorChoice::FixedEffects => fixed_effects(&sample, spec, &mut warnings)?,
                _ => random_effects(&sample, spec, RandomEffectsOptions::default(), &mut warnings)?,
            };
            (r, h)
        }
    };

    let d = cfg.rounding.regression;
    let mut out = OutputSet::new();
    out.add("describe.csv", describe_table(&sample, rc)?.to_csv());
    let hausman_text = match &h {
        Ok(h) => format!(
            "{}\nRecommendation: {} (p = {}, threshold {})\n",
            hausman_table(h, spec.effects).to_aligned(),
            h.recommendation.label(),
            fixed(h.p_value, 4),
            rc.hausman_threshold
        ),
        Err(e) => format!("Hausman test not available: {e}\n"),
    };
    out.add("hausman.txt", hausman_text);
    out.add("regression.txt", regression_text(&chosen, rc, d));
    out.add("regression.csv", regression_table(&chosen, rc, d).to_csv());

    let mut outputs = out.names();
    outputs.push("regress_manifest.json".into());
    let manifest = RegressManifest {
        tool: "compind",
        version: env!("CARGO_PKG_VERSION"),
        command: "regress",
        config: cfg.resolved(),
        n_obs: chosen.n_obs,
        n_groups: chosen.n_groups,
        estimator: chosen.estimator.label().to_string(),
        hausman: h.as_ref().ok().map(|h| HausmanEntry {
            statistic: h.statistic,
            df: h.df,
            p_value: h.p_value,
            recommendation: h.recommendation.label().to_string(),
            coefficients: h.coefficients.clone(),
        }),
        hausman_error: h.as_ref().err().map(|e| e.to_string()),
        outputs,
        warnings: warnings.iter().map(|w| w.to_string()).collect(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    out.add("regress_manifest.json", json);
    Ok((out, chosen))
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> AppResult<RegressionResult> {
    let (files, result) = render(cfg)?;
    files.commit(out_dir)?;
    if let Some(h) = files.get("hausman.txt") {
        print!("{}", String::from_utf8_lossy(h));
    }
    println!("{} estimates written to {}", result.estimator, out_dir.display());
    Ok(result)
}
