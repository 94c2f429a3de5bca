//! CO₂ emissions from primary-energy and electricity consumption.

use alloc::string::ToString;
use core::fmt;

use crate::error::{Error, Result};

/// Regional power grids with published electricity emission factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridRegion {
    NorthChina,
    Northeast,
    EastChina,
    CentralChina,
    Northwest,
    ChinaSouthern,
}

impl GridRegion {
    pub const ALL: [GridRegion; 6] = [
        GridRegion::NorthChina,
        GridRegion::Northeast,
        GridRegion::EastChina,
        GridRegion::CentralChina,
        GridRegion::Northwest,
        GridRegion::ChinaSouthern,
    ];

    /// Key used in factor override files and configuration.
    pub fn key(self) -> &'static str {
        match self {
            GridRegion::NorthChina => "north_china",
            GridRegion::Northeast => "northeast",
            GridRegion::EastChina => "east_china",
            GridRegion::CentralChina => "central_china",
            GridRegion::Northwest => "northwest",
            GridRegion::ChinaSouthern => "china_southern",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let k = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        GridRegion::ALL
            .into_iter()
            .find(|g| g.key() == k)
            .ok_or_else(|| Error::UnknownGridRegion(s.to_string()))
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for GridRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Emission factors: fuels in kgCO₂ per kg (coal, oil) or per m³ (gas),
/// grids in kgCO₂ per kWh.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionFactorTable {
    pub coal: f64,
    pub oil: f64,
    pub natural_gas: f64,
    grid: [f64; 6],
}

impl Default for EmissionFactorTable {
    fn default() -> Self {
        EmissionFactorTable {
            coal: 1.978,
            oil: 3.065,
            natural_gas: 1.809,
            grid: [0.8843, 0.7769, 0.7035, 0.5257, 0.6671, 0.5271],
        }
    }
}

impl EmissionFactorTable {
    pub fn grid(&self, region: GridRegion) -> f64 {
        self.grid[region.index()]
    }

    /// Overrides one factor by key (`coal`, `oil`, `natural_gas`, or a grid key).
    pub fn set(&mut self, key: &str, factor: f64) -> Result<()> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::NegativeQuantity("factor"));
        }
        match key.trim().to_ascii_lowercase().as_str() {
            "coal" => self.coal = factor,
            "oil" => self.oil = factor,
            "natural_gas" | "gas" => self.natural_gas = factor,
            other => self.grid[GridRegion::parse(other)?.index()] = factor,
        }
        Ok(())
    }
}

/// Energy consumed by a region in one period.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConsumptionBundle {
    pub coal_kg: f64,
    pub oil_kg: f64,
    pub gas_m3: f64,
    pub electricity_kwh: f64,
}

impl ConsumptionBundle {
    pub fn new(coal_kg: f64, oil_kg: f64, gas_m3: f64, electricity_kwh: f64) -> Self {
        ConsumptionBundle {
            coal_kg,
            oil_kg,
            gas_m3,
            electricity_kwh,
        }
    }
}

/// kgCO₂ for a bundle, using the given region's grid factor for electricity.
pub fn estimate_emissions(table: &EmissionFactorTable, bundle: &ConsumptionBundle, region: GridRegion) -> Result<f64> {
    let parts = [
        ("coal_kg", bundle.coal_kg, table.coal),
        ("oil_kg", bundle.oil_kg, table.oil),
        ("gas_m3", bundle.gas_m3, table.natural_gas),
        ("electricity_kwh", bundle.electricity_kwh, table.grid(region)),
    ];
    let mut total = 0.0;
    for (name, q, f) in parts {
        if !(q >= 0.0) {
            return Err(Error::NegativeQuantity(name));
        }
        total += q * f;
    }
    Ok(total)
}

/// Default grid for the three pilot areas (`BJ`, `SH`, `GD`, or full names).
pub fn default_pilot_grid(pilot: &str) -> Option<GridRegion> {
    match pilot.trim().to_ascii_lowercase().as_str() {
        "bj" | "beijing" => Some(GridRegion::NorthChina),
        "sh" | "shanghai" => Some(GridRegion::EastChina),
        "gd" | "guangdong" => Some(GridRegion::ChinaSouthern),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_kg_coal() {
        let t = EmissionFactorTable::default();
        for g in GridRegion::ALL {
            let e = estimate_emissions(&t, &ConsumptionBundle::new(1.0, 0.0, 0.0, 0.0), g).unwrap();
            assert_eq!(e, 1.978);
        }
    }

    #[test]
    fn zero_bundle() {
        let t = EmissionFactorTable::default();
        assert_eq!(
            estimate_emissions(&t, &ConsumptionBundle::default(), GridRegion::NorthChina).unwrap(),
            0.0
        );
    }

    #[test]
    fn worked_bundle() {
        let t = EmissionFactorTable::default();
        let e = estimate_emissions(&t, &ConsumptionBundle::new(2.0, 1.0, 10.0, 100.0), GridRegion::EastChina).unwrap();
        assert!((e - 95.461).abs() < 1e-9);
    }

    #[test]
    fn grid_factors() {
        let t = EmissionFactorTable::default();
        let want = [0.8843, 0.7769, 0.7035, 0.5257, 0.6671, 0.5271];
        for (g, w) in GridRegion::ALL.iter().zip(want) {
            assert_eq!(t.grid(*g), w);
        }
    }

    #[test]
    fn errors() {
        let t = EmissionFactorTable::default();
        assert_eq!(
            estimate_emissions(&t, &ConsumptionBundle::new(-1.0, 0.0, 0.0, 0.0), GridRegion::Northwest),
            Err(Error::NegativeQuantity("coal_kg"))
        );
        assert!(matches!(GridRegion::parse("Mars Grid"), Err(Error::UnknownGridRegion(_))));
        assert_eq!(GridRegion::parse("East China"), Ok(GridRegion::EastChina));
    }

    #[test]
    fn override_and_pilots() {
        let mut t = EmissionFactorTable::default();
        t.set("east_china", 0.6).unwrap();
        assert_eq!(t.grid(GridRegion::EastChina), 0.6);
        assert!(t.set("coal", 0.0).is_err());
        assert_eq!(default_pilot_grid("GD"), Some(GridRegion::ChinaSouthern));
        assert_eq!(default_pilot_grid("Beijing"), Some(GridRegion::NorthChina));
        assert_eq!(default_pilot_grid("TJ"), None);
    }
}
