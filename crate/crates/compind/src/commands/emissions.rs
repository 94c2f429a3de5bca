use std::path::Path;

use compind_core::emissions::{estimate_emissions, ConsumptionBundle, EmissionFactorTable, GridRegion};

use crate::error::AppResult;
use crate::format::{fixed, Table};
use crate::ingest::{read_consumption, read_factor_overrides};

pub fn factor_table(overrides: Option<&Path>) -> AppResult<EmissionFactorTable> {
    let mut t = EmissionFactorTable::default();
    if let Some(p) = overrides {
        read_factor_overrides(p, &mut t)?;
    }
    Ok(t)
}

pub fn single(table: &EmissionFactorTable, bundle: &ConsumptionBundle, region: GridRegion) -> AppResult<f64> {
    Ok(estimate_emissions(table, bundle, region)?)
}

/// `entity,year,region,emissions_kgco2` for every row of a consumption file.
pub fn batch(table: &EmissionFactorTable, input: &Path) -> AppResult<Table> {
    let mut t = Table::new(["entity", "year", "region", "emissions_kgco2"]);
    for row in read_consumption(input)? {
        let kg = estimate_emissions(table, &row.bundle, row.region)?;
        t.push([row.entity, row.year.to_string(), row.region.key().to_string(), fixed(kg, 6)]);
    }
    Ok(t)
}
