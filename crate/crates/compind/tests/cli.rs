use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compind"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Fresh synthetic inputs in a temporary directory.
fn workspace(seed: u64) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", "--seed", &seed.to_string(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cfg = dir.path().join("config.toml");
    (dir, cfg)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_passes_on_complete_data() {
    let (_d, cfg) = workspace(1);
    let o = run(&["validate", "--config", s(&cfg)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] complete panel"));
}

#[test]
fn validate_reports_missing_cell_coordinates() {
    let (d, cfg) = workspace(2);
    let data = d.path().join("indicators.csv");
    let text = fs::read_to_string(&data).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("GD,2017,issuance,")).collect();
    fs::write(&data, kept.join("\n") + "\n").unwrap();
    let o = run(&["validate", "--config", s(&cfg)]);
    assert_eq!(code(&o), 1);
    assert!(
        stdout(&o).contains("[FAIL] complete panel: entity GD, year 2017, indicator issuance"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn unknown_normalization_is_a_usage_error() {
    let (_d, cfg) = workspace(3);
    let text = fs::read_to_string(&cfg).unwrap().replace("\"maut\"", "\"zscore\"");
    fs::write(&cfg, text).unwrap();
    for cmd in ["validate", "build"] {
        let o = run(&[cmd, "--config", s(&cfg)]);
        assert_eq!(code(&o), 2, "{cmd}: {}", stderr(&o));
        assert!(stderr(&o).contains("zscore"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["build"])), 2);
    assert_eq!(code(&run(&["validate", "--config", "/nonexistent/config.toml"])), 2);
}

#[test]
fn build_writes_tables_and_manifest() {
    let (d, cfg) = workspace(4);
    let out = d.path().join("run");
    let o = run(&["build", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in ["cti.csv", "cii.csv", "cfi.csv", "ssm.csv", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let cti = fs::read_to_string(out.join("cti.csv")).unwrap();
    let lines: Vec<&str> = cti.lines().collect();
    assert_eq!(lines[0], "Region,2015,2016,2017,2018,2019,2020,Regional average");
    assert!(lines[4].starts_with("Period average,"));
    assert!(lines[5].starts_with("Standard deviation,") && lines[5].ends_with(','));
    let cell = lines[1].split(',').nth(1).unwrap();
    assert_eq!(cell.split('.').nth(1).unwrap().len(), 3);

    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let selected = manifest["selected_method"].as_str().unwrap();
    assert!(["SAW", "WP", "WDI2", "WDIInf", "TOPSIS"].contains(&selected));
    assert_eq!(manifest["config"]["normalization"], "maut");
    assert_eq!(manifest["config"]["ssm_input"], "raw");
    let ssm = fs::read_to_string(out.join("ssm.csv")).unwrap();
    assert_eq!(ssm.lines().count(), 1 + 3 * 5);
}

#[test]
fn build_is_byte_identical_across_runs_and_directories() {
    let (d, cfg) = workspace(5);
    let a = d.path().join("a");
    let b = d.path().join("nested/b");
    for out in [&a, &b] {
        assert_eq!(code(&run(&["build", "--config", s(&cfg), "--out", s(out)])), 0);
    }
    for f in ["cti.csv", "cii.csv", "cfi.csv", "ssm.csv", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn failed_build_writes_nothing() {
    let (d, cfg) = workspace(6);
    let data = d.path().join("indicators.csv");
    let text = fs::read_to_string(&data).unwrap();
    let broken: String = text
        .lines()
        .map(|l| if l.starts_with("SH,2018,price_sd,") { "SH,2018,price_sd,0".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&data, broken + "\n").unwrap();
    let out = d.path().join("out");
    let o = run(&["build", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("price_sd"), "{}", stderr(&o));
    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn regress_writes_reports_and_recommendation() {
    let (d, cfg) = workspace(7);
    let out = d.path().join("reg");
    let o = run(&["regress", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("Recommendation:"));
    let describe = fs::read_to_string(out.join("describe.csv")).unwrap();
    assert!(describe.starts_with("Variables,Mean value,Standard deviation,Minimum value,Median,Maximum value\nCFI,"));
    let hausman = fs::read_to_string(out.join("hausman.txt")).unwrap();
    assert!(hausman.contains("Cross-section random"));
    let reg = fs::read_to_string(out.join("regression.txt")).unwrap();
    for label in ["PSI", "Patent", "Size", "Location", "Energy", "R-squared", "Prob(F-statistic)"] {
        assert!(reg.contains(label), "{label}");
    }
}

fn regression_config(dir: &Path, csv: &str, regressors: &[&str], estimator: &str) -> PathBuf {
    fs::write(dir.join("panel.csv"), csv).unwrap();
    let list = regressors.iter().map(|r| format!("\"{r}\"")).collect::<Vec<_>>().join(", ");
    let cfg = dir.join("reg.toml");
    fs::write(
        &cfg,
        format!("[regression]\ndataset = \"panel.csv\"\nregressors = [{list}]\nestimator = \"{estimator}\"\n"),
    )
    .unwrap();
    cfg
}

#[test]
fn exact_line_prints_slope_three() {
    let d = tempfile::tempdir().unwrap();
    let mut csv = String::from("entity,year,cfi,x\n");
    for (e, name) in ["A", "B", "C"].iter().enumerate() {
        for t in 0..5 {
            let x = (e * 5 + t) as f64 * 0.5 + (t * t) as f64 * 0.1;
            csv.push_str(&format!("{name},{},{},{x}\n", 2015 + t, 2.0 + 3.0 * x));
        }
    }
    let cfg = regression_config(d.path(), &csv, &["x"], "pooled");
    let out = d.path().join("out");
    let o = run(&["regress", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reg = fs::read_to_string(out.join("regression.txt")).unwrap();
    let row = reg.lines().find(|l| l.starts_with("x ")).unwrap();
    assert!(row.contains("3.000000"), "{row}");
    let c = reg.lines().find(|l| l.starts_with("C ")).unwrap();
    assert!(c.contains("2.000000"), "{c}");
}

#[test]
fn collinear_regressors_are_named() {
    let d = tempfile::tempdir().unwrap();
    let mut csv = String::from("entity,year,cfi,psi,psi2,energy\n");
    for e in 0..4 {
        for t in 0..5 {
            let psi = 0.1 * (e + t) as f64 + 0.03 * (t * t) as f64;
            let energy = ((e * 7 + t * 3) % 5) as f64 * 0.1;
            csv.push_str(&format!("E{e},{},{},{psi},{},{energy}\n", 2015 + t, 0.1 + psi + energy, 2.0 * psi));
        }
    }
    let cfg = regression_config(d.path(), &csv, &["psi", "psi2", "energy"], "pooled");
    let o = run(&["regress", "--config", s(&cfg), "--out", s(&d.path().join("out"))]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("psi") && err.contains("psi2"), "{err}");
}

#[test]
fn regress_is_byte_identical_across_runs() {
    let (d, cfg) = workspace(8);
    let a = d.path().join("a");
    let b = d.path().join("b");
    for out in [&a, &b] {
        assert_eq!(code(&run(&["regress", "--config", s(&cfg), "--out", s(out)])), 0);
    }
    for f in ["describe.csv", "hausman.txt", "regression.txt", "regression.csv", "regress_manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn report_rerenders_saved_artifacts() {
    let (d, cfg) = workspace(9);
    let out = d.path().join("out");
    assert_eq!(code(&run(&["build", "--config", s(&cfg), "--out", s(&out)])), 0);
    assert_eq!(code(&run(&["regress", "--config", s(&cfg), "--out", s(&out)])), 0);
    let o = run(&["report", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    for section in ["== cti.csv ==", "== ssm.csv ==", "== hausman.txt ==", "== regression.txt =="] {
        assert!(text.contains(section), "{section}");
    }
    assert_eq!(fs::read_to_string(out.join("report.txt")).unwrap(), text);
    let again = run(&["report", "--config", s(&cfg)]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again), text);

    let empty = d.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(code(&run(&["report", "--out", s(&empty)])), 1);
}

#[test]
fn emissions_for_a_single_bundle() {
    let o = run(&["emissions", "--coal", "2", "--oil", "1", "--gas", "10", "--kwh", "100", "--region", "east_china"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "95.461000");
    assert_eq!(code(&run(&["emissions", "--region", "atlantis"])), 2);
}

#[test]
fn emissions_batch_with_overrides() {
    let d = tempfile::tempdir().unwrap();
    let input = d.path().join("use.csv");
    fs::write(&input, "entity,year,coal_kg,oil_kg,gas_m3,electricity_kwh\nBJ,2020,1,0,0,10\nGD,2020,0,0,0,10\n").unwrap();
    let factors = d.path().join("f.csv");
    fs::write(&factors, "key,unit,factor\nnorth_china,kgCO2/kWh,1.0\n").unwrap();
    let o = run(&["emissions", "--input", s(&input), "--factors", s(&factors)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "entity,year,region,emissions_kgco2\nBJ,2020,north_china,11.978000\nGD,2020,china_southern,5.271000\n"
    );
}
