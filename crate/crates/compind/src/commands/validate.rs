use std::collections::{BTreeMap, BTreeSet};

use compind_core::{apply_prep, validate_dataset, Prep, RawRecord};

use crate::config::RunConfig;
use crate::error::AppResult;
use crate::ingest::{read_indicator_records, read_regression_sample};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.status {
            Status::Pass => write!(f, "[PASS] {}", self.name),
            Status::Fail(m) => write!(f, "[FAIL] {}: {m}", self.name),
        }
    }
}

const LIST_LIMIT: usize = 10;

fn listing(items: &[String]) -> String {
    let mut s = items.iter().take(LIST_LIMIT).cloned().collect::<Vec<_>>().join("; ");
    if items.len() > LIST_LIMIT {
        s.push_str(&format!("; … and {} more", items.len() - LIST_LIMIT));
    }
    s
}

fn verdict(problems: Vec<String>) -> Status {
    if problems.is_empty() {
        Status::Pass
    } else {
        Status::Fail(listing(&problems))
    }
}

fn record_checks(cfg: &RunConfig, records: &[RawRecord], out: &mut Vec<Check>) -> AppResult<()> {
    let h = cfg.require_hierarchy()?;
    let known: BTreeSet<&str> = h.indicators().iter().map(|s| s.id.as_str()).collect();
    let present: BTreeSet<&str> = records.iter().map(|r| r.indicator.as_str()).collect();

    out.push(Check {
        name: "hierarchy indicators present",
        status: verdict(
            h.indicators()
                .iter()
                .filter(|s| !present.contains(s.id.as_str()))
                .map(|s| format!("`{}` has no rows", s.id))
                .collect(),
        ),
    });
    out.push(Check {
        name: "indicators known",
        status: verdict(
            present
                .iter()
                .filter(|id| !known.contains(*id))
                .map(|id| format!("`{id}` is not in the hierarchy"))
                .collect(),
        ),
    });

    let observed: BTreeSet<&str> = records.iter().map(|r| r.entity.as_str()).collect();
    let entities: Vec<String> = match &cfg.entities {
        Some(list) => {
            let listed: BTreeSet<&str> = list.iter().map(String::as_str).collect();
            let mut problems: Vec<String> = observed
                .iter()
                .filter(|e| !listed.contains(*e))
                .map(|e| format!("`{e}` is not listed in `entities`"))
                .collect();
            problems.extend(
                list.iter()
                    .filter(|e| !observed.contains(e.as_str()))
                    .map(|e| format!("`{e}` has no rows")),
            );
            out.push(Check {
                name: "entities match configuration",
                status: verdict(problems),
            });
            list.clone()
        }
        None => observed.iter().map(|e| e.to_string()).collect(),
    };

    out.push(Check {
        name: "finite values",
        status: verdict(
            records
                .iter()
                .filter(|r| !r.value.is_finite())
                .map(|r| format!("{} {} {}", r.entity, r.year, r.indicator))
                .collect(),
        ),
    });

    let mut counts: BTreeMap<(&str, i32, &str), usize> = BTreeMap::new();
    for r in records {
        *counts.entry((&r.entity, r.year, &r.indicator)).or_default() += 1;
    }
    out.push(Check {
        name: "no duplicate cells",
        status: verdict(
            counts
                .iter()
                .filter(|(_, &n)| n > 1)
                .map(|((e, y, i), n)| format!("{e} {y} {i} ({n} rows)"))
                .collect(),
        ),
    });

    let years: BTreeSet<i32> = records.iter().map(|r| r.year).collect();
    let mut missing = Vec::new();
    for e in &entities {
        for &y in &years {
            for s in h.indicators() {
                if !counts.contains_key(&(e.as_str(), y, s.id.as_str())) {
                    missing.push(format!("entity {e}, year {y}, indicator {}", s.id));
                }
            }
        }
    }
    out.push(Check {
        name: "complete panel",
        status: verdict(missing),
    });

    let recip: BTreeSet<&str> = h
        .indicators()
        .iter()
        .filter(|s| s.prep == Prep::Reciprocal)
        .map(|s| s.id.as_str())
        .collect();
    out.push(Check {
        name: "reciprocal inputs positive",
        status: verdict(
            records
                .iter()
                .filter(|r| recip.contains(r.indicator.as_str()) && r.value <= 0.0)
                .map(|r| format!("{} {} {} = {}", r.entity, r.year, r.indicator, r.value))
                .collect(),
        ),
    });

    let status = match validate_dataset(records, h, cfg.entities.as_deref()).and_then(|ds| apply_prep(&ds)) {
        Ok(_) => Status::Pass,
        Err(e) => Status::Fail(e.to_string()),
    };
    out.push(Check {
        name: "dataset assembles",
        status,
    });
    Ok(())
}

/// Runs every check. Configuration problems abort with an error; data
/// problems are reported as failed checks.
pub fn checks(cfg: &RunConfig) -> AppResult<Vec<Check>> {
    let mut out = vec![Check {
        name: "configuration",
        status: Status::Pass,
    }];
    if cfg.hierarchy.is_some() || cfg.dataset.is_some() {
        let path = cfg.require_dataset()?;
        cfg.require_hierarchy()?;
        match read_indicator_records(path) {
            Ok(records) => {
                out.push(Check {
                    name: "indicator file readable",
                    status: Status::Pass,
                });
                record_checks(cfg, &records, &mut out)?;
            }
            Err(e) => out.push(Check {
                name: "indicator file readable",
                status: Status::Fail(e.to_string()),
            }),
        }
    }
    if let Some(r) = &cfg.regression {
        let status = match read_regression_sample(&r.dataset, &r.response, &r.spec.regressors) {
            Ok(_) => Status::Pass,
            Err(e) => Status::Fail(e.to_string()),
        };
        out.push(Check {
            name: "regression file readable",
            status,
        });
    }
    Ok(out)
}

/// Prints one line per check; returns whether every check passed.
pub fn run(cfg: &RunConfig) -> AppResult<bool> {
    let checks = checks(cfg)?;
    for c in &checks {
        println!("{c}");
    }
    Ok(checks.iter().all(|c| !matches!(c.status, Status::Fail(_))))
}
