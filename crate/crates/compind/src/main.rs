use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use compind::commands::{build, emissions, regress, report, simulate, validate};
use compind::{AppError, AppResult, RunConfig};
use compind_core::emissions::{ConsumptionBundle, GridRegion};

/// Composite-indicator construction and panel regression.
#[derive(Debug, Parser)]
#[command(name = "compind", version)]
struct Cli {
    /// Log level for diagnostics on stderr (error, warn, info, debug).
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory; overrides `output_dir` from the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the configuration and input files.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Build the index tables and the method-selection report.
    Build {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Descriptive statistics, Hausman test and regression report.
    Regress {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-render saved artifacts as an aligned text report.
    Report {
        /// Configuration whose `output_dir` holds the artifacts.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write a synthetic dataset, regressor panel and configuration.
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// CO₂ emissions from energy consumption.
    Emissions(EmissionsArgs),
}

#[derive(Debug, Args)]
struct EmissionsArgs {
    /// Factor override file (`key,unit,factor`).
    #[arg(long)]
    factors: Option<PathBuf>,
    /// Consumption file; without it a single bundle is read from the flags.
    #[arg(long, conflicts_with_all = ["coal", "oil", "gas", "kwh", "region"])]
    input: Option<PathBuf>,
    /// Write the batch result here instead of stdout.
    #[arg(long, requires = "input")]
    output: Option<PathBuf>,
    /// Coal burned, kg.
    #[arg(long, default_value_t = 0.0)]
    coal: f64,
    /// Oil burned, kg.
    #[arg(long, default_value_t = 0.0)]
    oil: f64,
    /// Natural gas burned, m³.
    #[arg(long, default_value_t = 0.0)]
    gas: f64,
    /// Electricity consumed, kWh.
    #[arg(long, default_value_t = 0.0)]
    kwh: f64,
    /// Grid region for electricity.
    #[arg(long, default_value = "east_china")]
    region: String,
}

fn out_dir(cfg: &RunConfig, out: &OutArgs) -> AppResult<PathBuf> {
    cfg.output_dir(out.out.as_deref())
}

fn run(cli: Cli) -> AppResult<ExitCode> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = RunConfig::load(&config.config)?;
            let ok = validate::run(&cfg)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Build { config, out } => {
            let cfg = RunConfig::load(&config.config)?;
            build::run(&cfg, &out_dir(&cfg, &out)?, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Regress { config, out } => {
            let cfg = RunConfig::load(&config.config)?;
            regress::run(&cfg, &out_dir(&cfg, &out)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { config, out } => {
            let dir = match (&out.out, config) {
                (Some(d), _) => d.clone(),
                (None, Some(c)) => out_dir(&RunConfig::load(&c)?, &out)?,
                (None, None) => return Err(AppError::Config("pass --out or --config".into())),
            };
            report::run(&dir)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { seed, out } => {
            simulate::run(seed, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Emissions(a) => {
            let table = emissions::factor_table(a.factors.as_deref())?;
            match &a.input {
                Some(input) => {
                    let csv = emissions::batch(&table, input)?.to_csv();
                    match &a.output {
                        Some(p) => write_file(p, &csv)?,
                        None => print!("{csv}"),
                    }
                }
                None => {
                    let region = GridRegion::parse(&a.region).map_err(|e| AppError::Config(e.to_string()))?;
                    let bundle = ConsumptionBundle::new(a.coal, a.oil, a.gas, a.kwh);
                    println!("{:.6}", emissions::single(&table, &bundle, region)?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_file(path: &Path, content: &str) -> AppResult<()> {
    std::fs::write(path, content).map_err(|e| AppError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log_level)
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
