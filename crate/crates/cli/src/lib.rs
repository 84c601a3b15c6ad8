//! Command-line front end for `cvgauss`: TOML-configured runs, region
//! sweeps and Fock-oracle cross-checks.

pub mod config;
pub mod error;
pub mod oracle_check;
pub mod report;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

pub use config::{Analysis, ExperimentConfig, SweepConfig};
pub use error::{CliError, CliResult};
pub use report::ReportDocument;

#[derive(Debug, Parser)]
#[command(
    name = "cvgauss",
    version,
    about = "Gaussian-state entanglement toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the configured state, run the requested analyses and emit a report.
    Run(CommonArgs),
    /// Classify a grid of (delta1, delta2) cells into regions.
    Sweep(CommonArgs),
    /// Compare closed-form quantities with the truncated Fock oracle.
    OracleCheck(CommonArgs),
    /// Parse and validate a config without running it.
    ValidateConfig(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory; without it results go to standard output.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Run(a)
            | Command::Sweep(a)
            | Command::OracleCheck(a)
            | Command::ValidateConfig(a) => a,
        }
    }
}

fn load(args: &CommonArgs) -> CliResult<ExperimentConfig> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Flattens a JSON document into `key,value` rows, one per scalar leaf.
pub fn flatten_csv(value: &Value) -> CliResult<String> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            Value::Null => out.push((prefix.to_owned(), String::new())),
            Value::String(s) => out.push((prefix.to_owned(), s.clone())),
            other => out.push((prefix.to_owned(), other.to_string())),
        }
    }
    let mut leaves = Vec::new();
    walk("", value, &mut leaves);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(["key", "value"]).map_err(err)?;
    for (k, v) in leaves {
        w.write_record([k, v]).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

/// One output document, written to a file under the output directory or to
/// standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub out_dir: Option<PathBuf>,
}

fn with_extension(name: &str, format: Format) -> String {
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Path::new(name)
        .with_extension(ext)
        .to_string_lossy()
        .into_owned()
}

/// Runs a subcommand and returns its artifacts without touching the file
/// system.
pub fn execute(command: &Command) -> CliResult<Outcome> {
    let args = command.args();
    let config = load(args)?;
    let validated = config.validate()?;
    let out_dir = args.out.clone().or_else(|| config.output.dir.clone());
    let mut artifacts = Vec::new();
    match command {
        Command::Run(_) => {
            let format = args.format.unwrap_or(Format::Json);
            let report = report::run(&config, &validated)?;
            let contents = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => flatten_csv(
                    &serde_json::to_value(&report)
                        .map_err(|e| CliError::Serialize(e.to_string()))?,
                )?,
            };
            artifacts.push(Artifact {
                file_name: with_extension(&config.output.report, format),
                contents,
            });
            if let (Some(name), Some(_)) = (&config.output.samples, &report.estimated) {
                let batch = report::sample_dump(&config, validated.require_state()?)?;
                let mut buf = Vec::new();
                batch
                    .write_csv(&mut buf)
                    .map_err(|e| CliError::Serialize(e.to_string()))?;
                artifacts.push(Artifact {
                    file_name: name.clone(),
                    contents: String::from_utf8(buf)
                        .map_err(|e| CliError::Serialize(e.to_string()))?,
                });
            }
        }
        Command::Sweep(_) => {
            let grid = config.sweep.as_ref().ok_or_else(|| {
                CliError::Config("the sweep command needs a [sweep] section".into())
            })?;
            let rows = sweep::sweep_region_map(grid)?;
            let format = args.format.unwrap_or(Format::Csv);
            let contents = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&rows, &grid.etas, &mut buf)
                        .map_err(|e| CliError::Serialize(e.to_string()))?;
                    String::from_utf8(buf).map_err(|e| CliError::Serialize(e.to_string()))?
                }
                Format::Json => to_json(&rows)?,
            };
            artifacts.push(Artifact {
                file_name: with_extension(&config.output.sweep, format),
                contents,
            });
        }
        Command::OracleCheck(_) => {
            let block = oracle_check::oracle_check(&config, &validated)?;
            let format = args.format.unwrap_or(Format::Json);
            let contents = match format {
                Format::Json => to_json(&block)?,
                Format::Csv => flatten_csv(
                    &serde_json::to_value(&block)
                        .map_err(|e| CliError::Serialize(e.to_string()))?,
                )?,
            };
            artifacts.push(Artifact {
                file_name: with_extension(&config.output.oracle, format),
                contents,
            });
        }
        Command::ValidateConfig(_) => {}
    }
    Ok(Outcome { artifacts, out_dir })
}

/// Writes artifacts to their destination and returns the paths written.
/// Without an output directory only the primary artifact is printed.
pub fn emit(outcome: &Outcome) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    match &outcome.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
                path: dir.clone(),
                source,
            })?;
            for a in &outcome.artifacts {
                let path = dir.join(&a.file_name);
                std::fs::write(&path, &a.contents).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
                written.push(path);
            }
        }
        None => {
            let mut artifacts = outcome.artifacts.iter();
            if let Some(primary) = artifacts.next() {
                let mut stdout = std::io::stdout().lock();
                match stdout
                    .write_all(primary.contents.as_bytes())
                    .and_then(|_| stdout.flush())
                {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                        return Err(CliError::Write {
                            path: PathBuf::from("<stdout>"),
                            source: e,
                        })
                    }
                    _ => {}
                }
            }
            for skipped in artifacts {
                eprintln!(
                    "skipped {}: needs an output directory (--out)",
                    skipped.file_name
                );
            }
        }
    }
    Ok(written)
}
