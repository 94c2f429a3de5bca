//! Synthetic inputs for trying the tool end to end.

use std::path::Path;

use compind_core::panel::DEFAULT_REGRESSORS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::AppResult;
use crate::format::{fixed, Table};
use crate::output::OutputSet;

const PILOTS: [&str; 3] = ["BJ", "GD", "SH"];
const INDEX_YEARS: std::ops::RangeInclusive<i32> = 2015..=2020;
const PANEL_YEARS: std::ops::RangeInclusive<i32> = 2014..=2020;
const REGIONS: usize = 10;

/// `(id, group, polarity, prep, typical level)`
const INDICATORS: [(&str, &str, &str, &str, f64); 8] = [
    ("ctq", "CTI", "benefit", "none", 1500.0),
    ("ccer", "CTI", "benefit", "none", 300.0),
    ("price_sd", "CTI", "benefit", "reciprocal", 8.0),
    ("trading_days", "CTI", "cost", "reciprocal", 200.0),
    ("issuance", "CII", "benefit", "none", 50.0),
    ("institutions", "CII", "benefit", "none", 40.0),
    ("emissions", "CII", "benefit", "none", 0.6),
    ("loan_rate", "CII", "cost", "none", 4.5),
];

pub fn config_text() -> String {
    let mut s = String::from(
        "# Synthetic example run.\n\
         dataset = \"indicators.csv\"\n\
         entities = [\"BJ\", \"GD\", \"SH\"]\n\
         normalization = \"maut\"\n\
         weighting = \"cv\"\n\
         candidates = [\"saw\", \"wp\", \"wdi2\", \"wdi_inf\", \"topsis\"]\n\
         ssm_input = \"raw\"\n\
         renormalize_top = false\n\
         output_dir = \"out\"\n\n\
         [rounding]\nindex = 3\nssm = 4\nregression = 6\n\n\
         [hierarchy]\ntop = \"CFI\"\ntop_label = \"Carbon finance index\"\n\
         groups = [\n  { id = \"CTI\", label = \"Carbon emission trading index\" },\n  \
         { id = \"CII\", label = \"Carbon reduction investment index\" },\n]\n\
         indicators = [\n",
    );
    for (id, group, pol, prep, _) in INDICATORS {
        s.push_str(&format!(
            "  {{ id = \"{id}\", group = \"{group}\", polarity = \"{pol}\", prep = \"{prep}\" }},\n"
        ));
    }
    s.push_str(
        "]\n\n[regression]\n\
         dataset = \"regressors.csv\"\n\
         response = \"cfi\"\n\
         regressors = [\"psi\", \"patent\", \"size\", \"location\", \"energy\"]\n\
         time_effects = false\n\
         effects = \"entity\"\n\
         hausman_threshold = 0.05\n\
         estimator = \"hausman\"\n",
    );
    s
}

/// Lognormal-ish indicator levels with an entity effect and a trend.
pub fn indicator_table(rng: &mut ChaCha8Rng) -> Table {
    let noise = Normal::new(0.0, 0.25).expect("valid sd");
    let mut t = Table::new(["entity", "year", "indicator", "value"]);
    let effects: Vec<f64> = PILOTS.iter().map(|_| rng.random_range(-0.4..0.4)).collect();
    for (e, pilot) in PILOTS.iter().enumerate() {
        for (k, year) in INDEX_YEARS.enumerate() {
            for (id, _, _, _, level) in INDICATORS {
                let v = level * (effects[e] + 0.05 * k as f64 + noise.sample(rng)).exp();
                t.push([pilot.to_string(), year.to_string(), id.to_string(), fixed(v, 6)]);
            }
        }
    }
    t
}

/// Random-effects panel with the default regressors.
pub fn regressor_table(rng: &mut ChaCha8Rng) -> Table {
    let std = Normal::new(0.0, 1.0).expect("valid sd");
    let mut t = Table::new(
        ["entity", "year", "cfi"]
            .into_iter()
            .chain(DEFAULT_REGRESSORS)
            .map(String::from),
    );
    for r in 0..REGIONS {
        let u = 0.03 * std.sample(rng);
        let location = (r % 2) as f64;
        let base_size: f64 = rng.random_range(2.0e4..1.4e5);
        for (k, year) in PANEL_YEARS.enumerate() {
            let psi: f64 = rng.random_range(0.15..0.6);
            let patent: f64 = rng.random_range(4.0..16.0);
            let size = base_size * (1.0 + 0.04 * k as f64);
            let energy: f64 = rng.random_range(0.01..0.36);
            let cfi = 0.05 - 0.1 * psi + 0.01 * patent + 2.5e-6 * size + 0.02 * location + 0.6 * energy
                + u
                + 0.02 * std.sample(rng);
            t.push([
                format!("R{:02}", r + 1),
                year.to_string(),
                fixed(cfi, 6),
                fixed(psi, 6),
                fixed(patent, 6),
                fixed(size, 2),
                fixed(location, 0),
                fixed(energy, 6),
            ]);
        }
    }
    t
}

pub fn render(seed: u64) -> OutputSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OutputSet::new();
    out.add("indicators.csv", indicator_table(&mut rng).to_csv());
    out.add("regressors.csv", regressor_table(&mut rng).to_csv());
    out.add("config.toml", config_text());
    out
}

pub fn run(seed: u64, out_dir: &Path) -> AppResult<()> {
    render(seed).commit(out_dir)?;
    println!("synthetic inputs (seed {seed}) written to {}", out_dir.display());
    Ok(())
}
