use std::fs;
use std::path::Path;

use crate::error::{AppError, AppResult};
use crate::format::Table;

const MANIFESTS: [&str; 2] = ["manifest.json", "regress_manifest.json"];

fn outputs_of(manifest: &Path) -> AppResult<Vec<String>> {
    let text = fs::read_to_string(manifest).map_err(|e| AppError::io(manifest, e))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| AppError::Data(format!("{}: {e}", manifest.display())))?;
    let list = v
        .get("outputs")
        .and_then(|o| o.as_array())
        .ok_or_else(|| AppError::Data(format!("{}: no `outputs` list", manifest.display())))?;
    Ok(list.iter().filter_map(|s| s.as_str().map(str::to_string)).collect())
}

/// Re-renders the saved artifacts in `dir` as one aligned text report.
pub fn render(dir: &Path) -> AppResult<String> {
    let mut report = String::new();
    let mut found = false;
    for m in MANIFESTS {
        let path = dir.join(m);
        if !path.exists() {
            continue;
        }
        found = true;
        for name in outputs_of(&path)? {
            if name.ends_with(".json") {
                continue;
            }
            let file = dir.join(&name);
            let text = fs::read_to_string(&file).map_err(|e| AppError::io(&file, e))?;
            report.push_str(&format!("== {name} ==\n"));
            if name.ends_with(".csv") {
                let t = Table::from_csv(&text).map_err(|e| AppError::Data(format!("{}: {e}", file.display())))?;
                report.push_str(&t.to_aligned());
            } else {
                report.push_str(&text);
            }
            report.push('\n');
        }
    }
    if !found {
        return Err(AppError::Data(format!(
            "{}: no manifest found; run `build` or `regress` first",
            dir.display()
        )));
    }
    Ok(report)
}

pub fn run(dir: &Path) -> AppResult<()> {
    let report = render(dir)?;
    let path = dir.join("report.txt");
    fs::write(&path, &report).map_err(|e| AppError::io(&path, e))?;
    print!("{report}");
    Ok(())
}
