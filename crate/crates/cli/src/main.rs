use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fiducial_cli::config::{CheckName, RunConfig};
use fiducial_cli::convert::{convert, Direction};
use fiducial_cli::figures::{emit_figure_data, Figure};
use fiducial_cli::simulate::SimulateConfig;
use fiducial_cli::{run_verify, CliError, Result};

#[derive(Parser)]
#[command(
    name = "fiducial",
    version,
    about = "Verify, convert and sample operational probabilistic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and report pass/fail per check.
    Verify {
        /// JSON run configuration; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated subset of checks.
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Option<Vec<CheckName>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-check wall-clock times in the JSON report.
        #[arg(long)]
        timing: bool,
    },
    /// Convert between operators and fiducial vectors.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write CSV data for the classical triangle or the qubit ball.
    EmitFigureData {
        #[arg(long, value_enum)]
        which: Figure,
        #[arg(long, default_value_t = 21)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample repeated measurements and report observed frequencies.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    CheckName::parse(s).ok_or_else(|| {
        let known: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
        format!("unknown check `{s}`; known checks: {}", known.join(", "))
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify {
            config,
            seed,
            checks,
            format,
            out,
            timing,
        } => {
            let mut cfg = match config {
                Some(path) => RunConfig::load(&path)?,
                None => RunConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(checks) = checks {
                cfg.checks = checks;
            }
            let mut report = run_verify(&cfg)?;
            if !timing {
                report = report.without_timing();
            }
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv()?,
                Format::Text => report.to_text(),
            };
            emit(&text, out.as_deref())?;
            if out.is_some() {
                eprint!("{}", report.to_text());
            }
            Ok(report.exit_code())
        }
        Command::Convert {
            direction,
            input,
            out,
        } => {
            let value = convert(&read(&input)?, &input.display().to_string(), direction)?;
            let mut text = serde_json::to_string_pretty(&value).expect("JSON value");
            text.push('\n');
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::EmitFigureData {
            which,
            resolution,
            seed,
            out,
        } => {
            emit_figure_data(which, resolution, seed, &out)?;
            Ok(0)
        }
        Command::Simulate {
            config,
            seed,
            format,
            out,
        } => {
            let cfg = SimulateConfig::from_json(&read(&config)?, &config.display().to_string())?;
            let report = cfg.run(seed)?;
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Json | Format::Text => {
                    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            emit(&text, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
