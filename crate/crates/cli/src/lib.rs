//! Library side of the `minlen` command-line tool.
//!
//! Every subcommand produces its whole output as text before anything is
//! written, so a failing run never leaves half a file behind.

pub mod args;
pub mod commands;
pub mod config;
pub mod figures;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::args::{Cli, Command};
use crate::commands::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Config { flag: String, message: String },
    #[error("no bound state: {0}")]
    NoBoundState(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn config(flag: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    pub fn numeric(e: impl std::fmt::Display) -> Self {
        CliError::Numeric(e.to_string())
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::NoBoundState(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let tol = config::resolve_tolerance(cli.tol, std::env::var(config::TOL_ENV).ok().as_deref())?;
    match &cli.command {
        Command::Solve {
            profile,
            couplings,
            quadrature,
        } => commands::solve(profile, couplings, tol, *quadrature),
        Command::Sweep {
            profile,
            gamma,
            alpha_min,
            alpha_max,
            alpha_steps,
            log,
            quadrature,
        } => commands::sweep(
            profile,
            *gamma,
            *alpha_min,
            *alpha_max,
            *alpha_steps,
            *log,
            tol,
            *quadrature,
        ),
        Command::Threshold {
            profile,
            alpha,
            quadrature,
        } => commands::threshold(profile, *alpha, tol, *quadrature),
        Command::Integrals { profile, eps } => commands::integrals(profile, eps, tol),
        Command::Verify { profile, eps } => commands::verify(profile, eps, tol),
        Command::Wavefunction {
            profile,
            couplings,
            samples,
            quadrature,
        } => commands::wavefunction(profile, couplings, *samples, tol, *quadrature),
        Command::LimitSweep {
            profile,
            physical,
            b_min,
            b_max,
            steps,
        } => commands::limit_sweep(profile, physical, *b_min, *b_max, *steps, tol),
        Command::Figure {
            figure,
            out_dir,
            profiles,
            gammas,
            alpha_min,
            alpha_max,
            alpha_steps,
        } => figures::emit_figure_data(
            &figures::FigureRequest {
                figure: *figure,
                profiles,
                gammas: gammas.as_deref(),
                alpha_min: *alpha_min,
                alpha_max: *alpha_max,
                alpha_steps: *alpha_steps,
                tol,
            },
            out_dir,
        ),
    }
}

/// Runs `cli`, writes its output and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let report = match execute(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("minlen: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &report.text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(report.text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    };
    if let Err(e) = written {
        eprintln!("minlen: {e}");
        return e.exit_code();
    }
    for w in &report.warnings {
        eprintln!("minlen: warning: {w}");
    }
    for f in &report.failures {
        eprintln!("minlen: {f}");
    }
    if report.failures.is_empty() {
        0
    } else {
        3
    }
}
