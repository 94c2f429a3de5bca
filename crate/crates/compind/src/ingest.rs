//! CSV readers for the input contracts.

use std::path::Path;

use compind_core::emissions::{default_pilot_grid, ConsumptionBundle, EmissionFactorTable, GridRegion};
use compind_core::panel::{PanelRow, PanelSample};
use compind_core::RawRecord;

use crate::error::{AppError, AppResult};

fn open(path: &Path) -> AppResult<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| AppError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn header(path: &Path, rdr: &mut csv::Reader<std::fs::File>) -> AppResult<Vec<String>> {
    let h = rdr
        .headers()
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    Ok(h.iter().map(|s| s.to_ascii_lowercase()).collect())
}

fn expect_header(path: &Path, found: &[String], expected: &[&str]) -> AppResult<()> {
    if found != expected {
        return Err(AppError::Data(format!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

fn bad(path: &Path, line: u64, msg: impl std::fmt::Display) -> AppError {
    AppError::Data(format!("{}:{line}: {msg}", path.display()))
}

fn parse_year(path: &Path, line: u64, s: &str) -> AppResult<i32> {
    if s.len() != 4 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(path, line, format!("year `{s}` is not a 4-digit integer")));
    }
    Ok(s.parse().expect("four ASCII digits"))
}

fn parse_value(path: &Path, line: u64, column: &str, s: &str) -> AppResult<f64> {
    s.parse::<f64>()
        .map_err(|_| bad(path, line, format!("{column} `{s}` is not a number")))
}

fn records(path: &Path, rdr: &mut csv::Reader<std::fs::File>) -> AppResult<Vec<(u64, csv::StringRecord)>> {
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

/// Long-format indicator panel: `entity,year,indicator,value`.
pub fn read_indicator_records(path: &Path) -> AppResult<Vec<RawRecord>> {
    let mut rdr = open(path)?;
    let h = header(path, &mut rdr)?;
    expect_header(path, &h, &["entity", "year", "indicator", "value"])?;
    let mut out = Vec::new();
    for (line, rec) in records(path, &mut rdr)? {
        let year = parse_year(path, line, &rec[1])?;
        let value = parse_value(path, line, "value", &rec[3])?;
        out.push(RawRecord::new(&rec[0], year, &rec[2], value));
    }
    if out.is_empty() {
        return Err(AppError::Data(format!("{}: no data rows", path.display())));
    }
    Ok(out)
}

/// Regression panel: `entity,year` followed by named numeric columns.
///
/// The response and every requested regressor must be present; a
/// `location` column must hold 0/1 dummies.
pub fn read_regression_sample(path: &Path, response: &str, regressors: &[String]) -> AppResult<PanelSample> {
    let mut rdr = open(path)?;
    let h = header(path, &mut rdr)?;
    if h.len() < 3 || h[0] != "entity" || h[1] != "year" {
        return Err(AppError::Data(format!(
            "{}: header must start with `entity,year`",
            path.display()
        )));
    }
    let col = |name: &str| {
        h.iter()
            .position(|c| c == &name.to_ascii_lowercase())
            .ok_or_else(|| AppError::Data(format!("{}: missing column `{name}`", path.display())))
    };
    let ycol = col(response)?;
    let xcols = regressors.iter().map(|r| col(r)).collect::<AppResult<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (line, rec) in records(path, &mut rdr)? {
        let year = parse_year(path, line, &rec[1])?;
        let y = parse_value(path, line, response, &rec[ycol])?;
        let mut xs = Vec::with_capacity(xcols.len());
        for (name, &c) in regressors.iter().zip(&xcols) {
            let v = parse_value(path, line, name, &rec[c])?;
            if name.eq_ignore_ascii_case("location") && v != 0.0 && v != 1.0 {
                return Err(bad(path, line, format!("location must be 0 or 1, got {v}")));
            }
            xs.push(v);
        }
        rows.push(PanelRow {
            entity: rec[0].to_string(),
            year,
            response: y,
            regressors: xs,
        });
    }
    PanelSample::new(response, regressors.to_vec(), rows).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))
}

fn expected_unit(key: &str) -> Option<&'static str> {
    match key {
        "coal" | "oil" => Some("kgco2/kg"),
        "natural_gas" | "gas" => Some("kgco2/m3"),
        k if GridRegion::parse(k).is_ok() => Some("kgco2/kwh"),
        _ => None,
    }
}

fn normalize_unit(u: &str) -> String {
    u.to_ascii_lowercase()
        .replace(['₂'], "2")
        .replace('³', "3")
        .replace(' ', "")
}

/// Applies a `key,unit,factor` override file to `table`.
pub fn read_factor_overrides(path: &Path, table: &mut EmissionFactorTable) -> AppResult<()> {
    let mut rdr = open(path)?;
    let h = header(path, &mut rdr)?;
    expect_header(path, &h, &["key", "unit", "factor"])?;
    for (line, rec) in records(path, &mut rdr)? {
        let key = rec[0].to_ascii_lowercase();
        let unit = expected_unit(&key).ok_or_else(|| bad(path, line, format!("unknown factor key `{key}`")))?;
        if normalize_unit(&rec[1]) != unit {
            return Err(bad(path, line, format!("unit `{}` does not match `{unit}` for `{key}`", &rec[1])));
        }
        let factor = parse_value(path, line, "factor", &rec[2])?;
        table.set(&key, factor).map_err(|e| bad(path, line, e))?;
    }
    Ok(())
}

/// One row of a consumption file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsumptionRow {
    pub entity: String,
    pub year: i32,
    pub bundle: ConsumptionBundle,
    pub region: GridRegion,
}

/// `entity,year,coal_kg,oil_kg,gas_m3,electricity_kwh[,region]`. Without a
/// region column the pilot default grid of the entity is used.
pub fn read_consumption(path: &Path) -> AppResult<Vec<ConsumptionRow>> {
    let mut rdr = open(path)?;
    let h = header(path, &mut rdr)?;
    let base = ["entity", "year", "coal_kg", "oil_kg", "gas_m3", "electricity_kwh"];
    let with_region = h.len() == 7 && h[6] == "region";
    if h[..h.len().min(6)] != base || !(h.len() == 6 || with_region) {
        return Err(AppError::Data(format!(
            "{}: expected header `{}[,region]`",
            path.display(),
            base.join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in records(path, &mut rdr)? {
        let year = parse_year(path, line, &rec[1])?;
        let mut q = [0.0; 4];
        for (k, slot) in q.iter_mut().enumerate() {
            *slot = parse_value(path, line, base[k + 2], &rec[k + 2])?;
        }
        let region = if with_region && !rec[6].is_empty() {
            GridRegion::parse(&rec[6]).map_err(|e| bad(path, line, e))?
        } else {
            default_pilot_grid(&rec[0])
                .ok_or_else(|| bad(path, line, format!("no default grid for `{}`; add a region column", &rec[0])))?
        };
        out.push(ConsumptionRow {
            entity: rec[0].to_string(),
            year,
            bundle: ConsumptionBundle::new(q[0], q[1], q[2], q[3]),
            region,
        });
    }
    Ok(out)
}
