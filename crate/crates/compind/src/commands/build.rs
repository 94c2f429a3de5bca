use std::path::Path;

use compind_core::{build_index, summarize, validate_dataset, IndexRun, IndexSeries, PanelDataset, Warning};
use serde::Serialize;

use crate::config::{ResolvedConfig, RunConfig};
use crate::error::AppResult;
use crate::format::{fixed, Table};
use crate::ingest::read_indicator_records;
use crate::output::OutputSet;

/// Layout: entities × years with a regional-average column, then period
/// average (grand mean in the last column) and standard deviation rows.
pub fn index_table(series: &IndexSeries, decimals: usize) -> Table {
    let s = summarize(series);
    let mut t = Table::new(
        std::iter::once("Region".to_string())
            .chain(series.years().iter().map(|y| y.to_string()))
            .chain(["Regional average".to_string()]),
    );
    for (e, name) in series.entities().iter().enumerate() {
        t.push(
            std::iter::once(name.clone())
                .chain(series.row(e).iter().map(|v| fixed(*v, decimals)))
                .chain([fixed(s.regional_average[e], decimals)]),
        );
    }
    t.push(
        std::iter::once("Period average".to_string())
            .chain(s.period_average.iter().map(|v| fixed(*v, decimals)))
            .chain([fixed(s.grand_mean, decimals)]),
    );
    t.push(
        std::iter::once("Standard deviation".to_string())
            .chain(s.period_sd.iter().map(|v| fixed(*v, decimals)))
            .chain([String::new()]),
    );
    t
}

/// Per-group losses by method and year with their means, followed by the
/// group-averaged means used for selection.
pub fn ssm_table(run: &IndexRun, group_ids: &[String], decimals: usize) -> Table {
    let years = &run.reports[0].years;
    let mut t = Table::new(
        ["Group", "Method"]
            .into_iter()
            .map(String::from)
            .chain(years.iter().map(|y| y.to_string()))
            .chain(["Mean".to_string()]),
    );
    for (gid, rep) in group_ids.iter().zip(&run.reports) {
        for (k, m) in rep.methods.iter().enumerate() {
            t.push(
                [gid.clone(), m.label().to_string()]
                    .into_iter()
                    .chain(rep.losses[k].iter().map(|d| fixed(*d, decimals)))
                    .chain([fixed(rep.means[k], decimals)]),
            );
        }
    }
    for (k, m) in run.reports[0].methods.iter().enumerate() {
        t.push(
            ["pooled".to_string(), m.label().to_string()]
                .into_iter()
                .chain(years.iter().map(|_| String::new()))
                .chain([fixed(run.pooled_means[k], decimals)]),
        );
    }
    t
}

#[derive(Debug, Serialize)]
struct GroupEntry {
    id: String,
    label: String,
    file: String,
    /// Minimum-loss method for this group alone.
    #[serde(skip_serializing_if = "Option::is_none")]
    group_minimum: Option<String>,
}

#[derive(Debug, Serialize)]
struct BuildManifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: ResolvedConfig,
    entities: Vec<String>,
    years: Vec<i32>,
    selected_method: String,
    pooled_means: Vec<f64>,
    means_overridden: bool,
    groups: Vec<GroupEntry>,
    top: GroupEntry,
    outputs: Vec<String>,
    warnings: Vec<String>,
}

pub(crate) fn file_name(id: &str) -> String {
    format!("{}.csv", id.to_lowercase())
}

/// Reads and validates the configured indicator panel.
pub fn load_dataset(cfg: &RunConfig) -> AppResult<PanelDataset> {
    let hierarchy = cfg.require_hierarchy()?;
    let records = read_indicator_records(cfg.require_dataset()?)?;
    Ok(validate_dataset(&records, hierarchy, cfg.entities.as_deref())?)
}

/// Renders every build output. `pooled_override` replaces the
/// group-averaged mean losses (one per candidate) before selection.
pub fn render(cfg: &RunConfig, pooled_override: Option<&[f64]>) -> AppResult<(OutputSet, IndexRun)> {
    let hierarchy = cfg.require_hierarchy()?;
    let ds = load_dataset(cfg)?;
    let mut warnings: Vec<Warning> = Vec::new();
    let run = build_index(&ds, hierarchy, &cfg.pipeline, pooled_override, &mut warnings)?;

    let d = cfg.rounding;
    let mut out = OutputSet::new();
    let group_ids: Vec<String> = hierarchy.groups().iter().map(|g| g.id.clone()).collect();
    let mut groups = Vec::new();
    for (g, series) in hierarchy.groups().iter().zip(&run.groups) {
        let name = file_name(&g.id);
        out.add(&name, index_table(series, d.index).to_csv());
        groups.push(GroupEntry {
            id: g.id.clone(),
            label: g.label.clone(),
            file: name,
            group_minimum: Some(run.reports[groups.len()].selected.label().to_string()),
        });
    }
    let top_name = file_name(hierarchy.top());
    out.add(&top_name, index_table(&run.top, d.index).to_csv());
    out.add("ssm.csv", ssm_table(&run, &group_ids, d.ssm).to_csv());

    let mut outputs = out.names();
    outputs.push("manifest.json".into());
    let manifest = BuildManifest {
        tool: "compind",
        version: env!("CARGO_PKG_VERSION"),
        command: "build",
        config: cfg.resolved(),
        entities: ds.entities().to_vec(),
        years: ds.years().to_vec(),
        selected_method: run.selected.label().to_string(),
        pooled_means: run.pooled_means.clone(),
        means_overridden: pooled_override.is_some(),
        groups,
        top: GroupEntry {
            id: hierarchy.top().to_string(),
            label: cfg.top_label.clone().unwrap_or_else(|| hierarchy.top().to_string()),
            file: top_name,
            group_minimum: None,
        },
        outputs,
        warnings: warnings.iter().map(|w| w.to_string()).collect(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    out.add("manifest.json", json);
    Ok((out, run))
}

pub fn run(cfg: &RunConfig, out_dir: &Path, pooled_override: Option<&[f64]>) -> AppResult<IndexRun> {
    let (files, run) = render(cfg, pooled_override)?;
    files.commit(out_dir)?;
    println!(
        "selected {} (pooled mean loss {}); wrote {} files to {}",
        run.selected,
        fixed(
            run.pooled_means[cfg.pipeline.candidates.iter().position(|&m| m == run.selected).unwrap_or(0)],
            cfg.rounding.ssm
        ),
        files.names().len(),
        out_dir.display()
    );
    Ok(run)
}
