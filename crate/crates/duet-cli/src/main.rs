//! `duet` — exact stationary statistics of two coupled damped quantum
//! oscillators, from the command line.
//!
//! Reads a flat `key = value` config file (optionally layered over a bundled
//! preset), runs one named analysis task, and writes a plot-ready CSV.
//!
//! ```text
//! duet --config run.cfg --task absorption --out absorption.csv \
//!      [--preset fig1a] [--omega-points 601]
//! ```
//!
//! The environment variable `DUET_THREADS` caps worker-thread parallelism
//! (unset: one worker per core). Exit codes: `0` success, `1` configuration
//! error, `2` numerical non-convergence, `3` physicality-check failure;
//! error messages name the failing invariant.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use duet::{DuetError, Result};

use duet_cli::config::RunConfig;
use duet_cli::tasks::Task;

#[derive(Parser, Debug)]
#[command(
    name = "duet",
    about = "Exact steady-state spectra, heat currents, covariances, and \
             entanglement measures of two coupled damped quantum oscillators",
    disable_help_subcommand = true
)]
struct Args {
    /// Path to the `key = value` run-configuration file.
    #[arg(long, value_name = "path")]
    config: PathBuf,

    /// Analysis to run: absorption, heat-spectrum, heat-sweep, covariance,
    /// entanglement-sweep, witness-spectra, fd-check, or oracle-check.
    #[arg(long, value_name = "name")]
    task: String,

    /// Output CSV path.
    #[arg(long, value_name = "path")]
    out: PathBuf,

    /// Bundled parameter set; overrides a `preset =` key in the config file.
    #[arg(long, value_name = "name")]
    preset: Option<String>,

    /// Number of frequency-grid points; overrides the `omega_points` key.
    #[arg(long, value_name = "N")]
    omega_points: Option<usize>,
}

fn main() -> ExitCode {
    // --help / --version must succeed; every other parse failure is a
    // configuration error (exit 1), not clap's default exit 2, which is
    // reserved here for numerical non-convergence.
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error: invalid parameter: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&args) {
        Ok(rows) => {
            println!("wrote {} ({rows} data rows)", args.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<usize> {
    configure_thread_pool()?;

    let task = Task::parse(&args.task)?;
    let text = fs::read_to_string(&args.config).map_err(|e| {
        DuetError::InvalidParameter(format!(
            "cannot read config file '{}': {e}",
            args.config.display()
        ))
    })?;
    let cfg = RunConfig::parse(&text)?;
    let resolved = cfg.resolve(args.preset.as_deref(), args.omega_points)?;

    let csv = task.run(&resolved)?;
    fs::write(&args.out, csv.render()).map_err(|e| {
        DuetError::InvalidParameter(format!(
            "cannot write output file '{}': {e}",
            args.out.display()
        ))
    })?;
    Ok(csv.row_count())
}

/// Applies the `DUET_THREADS` cap to the global worker pool before any
/// parallel work starts.
fn configure_thread_pool() -> Result<()> {
    let Some(raw) = std::env::var_os("DUET_THREADS") else {
        return Ok(());
    };
    let parsed = raw
        .to_str()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let Some(n) = parsed else {
        return Err(DuetError::InvalidParameter(format!(
            "DUET_THREADS must be a positive integer, got '{}'",
            raw.to_string_lossy()
        )));
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| {
            DuetError::InvalidParameter(format!("cannot configure thread pool: {e}"))
        })
}
