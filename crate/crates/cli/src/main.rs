//! `spdc-cascade`: figure-reproduction front end.
//!
//! Every subcommand reads one TOML configuration (built-in reference defaults
//! when none is given), validates all of it, computes, and writes a CSV
//! table. Summaries are single-line JSON records.

mod commands;
mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{ConfigError, RunConfig, Setup};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "spdc-cascade",
    version,
    about = "Cascaded type-II SPDC source simulator"
)]
struct Cli {
    /// Configuration file (TOML). Built-in reference parameters when omitted.
    #[arg(long, global = true, env = "SPDC_CASCADE_CONFIG")]
    config: Option<PathBuf>,

    /// Output file for the table; stdout when omitted. Written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write the one-line JSON summary to this file.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Refractive and group indices of the configured material.
    Indices {
        /// Wavelengths in nm; overrides `[indices] wavelengths_nm`.
        #[arg(long = "wavelength-nm", value_name = "NM")]
        wavelengths: Vec<f64>,
    },
    /// Emission times of the four photon classes around the cones.
    EmissionMap,
    /// Coincidence rate versus the delay in path B.
    Scan,
    /// Space-time visibility versus the delay in path B.
    VisibilityCurve,
    /// Coincidence rate versus the angle of analyzer B.
    Polarization,
    /// Optimal delays and equivalent quartz thicknesses.
    Optimize,
}

/// Table plus summary produced by a command.
pub struct Report {
    pub table: String,
    pub summary: Option<String>,
}

/// I/O failures (exit code 4).
#[derive(Debug)]
struct IoError(String);

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoError {}

fn load(path: Option<&Path>) -> Result<Setup> {
    let (cfg, base) = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| IoError(format!("cannot read config {}: {e}", p.display())))?;
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (RunConfig::parse(&text)?, base)
        }
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    Ok(cfg.validate(&base)?)
}

/// Writes `contents` next to `path` and renames it into place, so that a
/// failed run never leaves a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| IoError(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let Format::Csv = cli.format;
    let setup = load(cli.config.as_deref())?;
    let report = match cli.command {
        Command::Indices { wavelengths } => commands::indices(&setup, &wavelengths)?,
        Command::EmissionMap => commands::emission_map(&setup)?,
        Command::Scan => commands::scan(&setup)?,
        Command::VisibilityCurve => commands::visibility_curve(&setup)?,
        Command::Polarization => commands::polarization(&setup)?,
        Command::Optimize => commands::optimize(&setup)?,
    };

    if let (Some(path), Some(summary)) = (&cli.summary, &report.summary) {
        write_atomic(path, summary)?;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e: std::io::Error| IoError(format!("cannot write to stdout: {e}"));
    match &cli.out {
        Some(path) => {
            write_atomic(path, &report.table)?;
            if let Some(s) = &report.summary {
                out.write_all(s.as_bytes()).map_err(io)?;
            }
        }
        None => {
            out.write_all(report.table.as_bytes()).map_err(io)?;
            if let Some(s) = &report.summary {
                eprint!("{s}");
            }
        }
    }
    out.flush().map_err(io).context("flushing output")?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
        if cause.is::<IoError>() || cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<spdc_cascade::Error>() {
            use spdc_cascade::Error as E;
            return match e {
                E::InvalidArgument(_) | E::MaterialDefinition(_) | E::MaterialParse(_) => {
                    EXIT_CONFIG
                }
                _ => EXIT_NUMERIC,
            };
        }
    }
    EXIT_NUMERIC
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
