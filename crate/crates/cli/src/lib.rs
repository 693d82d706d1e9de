//! Command-line front end for cilab-core: load a JSON document, run one
//! analysis, emit the report as JSON or CSV.

use std::path::PathBuf;

use cilab_core::report::{CriteriaReport, Verdict};
use cilab_core::sampling::Exec;
use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod input;
pub mod output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] cilab_core::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for anything the caller can fix; 1 for internal consistency failures.
    pub fn exit_code(&self) -> i32 {
        use cilab_core::Error as E;
        match self {
            CliError::Core(E::Consistency(_) | E::Calibration(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Calibrated model constants and the convention search
    Calibrate,
    /// Split a 2-form into its T_η eigenspace parts
    Decompose,
    /// Classify a curvature as SD / ASD / LAMBDA_MINUS_2 / NONE
    Classify,
    /// Spectra of 𝓕, 𝓡 and 𝓕+𝓡 on Ω^{2,0}⊗𝔤
    Spectrum,
    /// Pointwise vanishing criteria for the second cohomology
    Vanishing,
    /// Algebraic Yang–Mills second variation
    Stability,
    /// Exactness of the deformation-complex symbol sequences
    Symbols,
    /// The Stiefel V^{5,2} example end to end
    Stiefel,
    /// All oracle suites
    Selftest,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "cilab", version, about = "Pointwise gauge-theory lab for Sasakian 7-manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input document
    #[arg(long, global = true, env = "CILAB_INPUT")]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true, env = "CILAB_OUTPUT")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0, env = "CILAB_SEED")]
    pub seed: u64,
    /// Sample count; selftest runs the heavier suites at samples/10 and samples/100
    #[arg(long, global = true, default_value_t = 10_000, env = "CILAB_SAMPLES",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Relative tolerance for eigenspace membership
    #[arg(long, global = true, default_value_t = 1e-9, env = "CILAB_TOL", value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "CILAB_FORMAT")]
    pub format: Format,
    /// Disable the thread pool (results are identical either way)
    #[arg(long, global = true, env = "CILAB_SEQUENTIAL")]
    pub sequential: bool,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("tolerance must be a positive finite number".into())
    }
}

impl Cli {
    pub fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

/// Exit status for a finished report.
pub fn verdict_exit_code(v: Verdict) -> i32 {
    if v == Verdict::Fail {
        1
    } else {
        0
    }
}

/// Runs the command and renders the report.
pub fn run(cli: &Cli) -> Result<(CriteriaReport, String), CliError> {
    let report = commands::dispatch(cli)?;
    let text = output::render(&report, cli.format)?;
    Ok((report, text))
}
