//! `pseudodet` command-line interface.
//!
//! Every subcommand writes exactly one JSON envelope to stdout (`sample` additionally
//! writes CSV, see [`commands::sample`]). Exit codes: 0 success, 1 input or parse error,
//! 2 numerical or precondition failure.

pub mod commands;
pub mod io;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pseudodet::matrix::{BuildPolicy, MINOR_CAP_ENV};
use pseudodet::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonSquare { .. }
            | Error::NotHermitian { .. }
            | Error::DimensionMismatch { .. }
            | Error::NotReal { .. }
            | Error::EmptyDataset
            | Error::InvalidArgument(_) => 1,
            Error::ConvergenceFailure { .. }
            | Error::CapExceeded { .. }
            | Error::DeterminantOverflow { .. }
            | Error::KernelMismatch { .. }
            | Error::RankDrift { .. }
            | Error::InvalidProjector { .. }
            | Error::NotPositiveSemidefinite { .. } => 2,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pseudodet", version, about = "Pseudo determinants, pseudo inverses and canonical gradients of Hermitian matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Relative eigenvalue cutoff for rank decisions [default: 1e-12 * n]
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Replace asymmetric input by its Hermitian part instead of rejecting it
    #[arg(long, global = true)]
    pub symmetrize: bool,

    /// Pretty-print the JSON envelope with this many spaces per level (compact if absent)
    #[arg(long, global = true)]
    pub json_indent: Option<usize>,

    /// Largest dimension accepted by the minor-sum methods
    #[arg(long, global = true, env = MINOR_CAP_ENV, default_value_t = pseudodet::matrix::DEFAULT_MINOR_CAP)]
    pub minor_cap: usize,
}

impl GlobalArgs {
    pub fn policy(&self) -> BuildPolicy {
        if self.symmetrize {
            BuildPolicy::Symmetrize
        } else {
            BuildPolicy::Reject
        }
    }

    pub fn options(&self) -> pseudodet::Options {
        pseudodet::Options { rel_tol: self.rel_tol, minor_cap: self.minor_cap, ..Default::default() }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pseudo determinant (product of non-zero eigenvalues)
    Pdet {
        input: PathBuf,
        #[arg(long, default_value = "spectral", value_parser = ["spectral", "limit", "minor"])]
        method: String,
        /// Shift schedule for the limit method, strictly decreasing
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
    },
    /// Moore-Penrose pseudo inverse
    Pinv {
        input: PathBuf,
        #[arg(long, default_value = "spectral", value_parser = ["spectral", "berg"])]
        method: String,
    },
    /// Canonical gradient can(A) = Det(A) A+
    Grad { input: PathBuf },
    /// Analytic vs finite-difference directional derivative along a kernel-preserving direction
    Check {
        input: PathBuf,
        direction: PathBuf,
        #[arg(long, default_value_t = pseudodet::calculus::DEFAULT_FD_STEP)]
        tau: f64,
        /// Use a forward instead of central difference
        #[arg(long)]
        forward: bool,
    },
    /// Covariance MLE from a CSV dataset
    Mle {
        data: PathBuf,
        /// Mean vector (JSON array)
        #[arg(long, conflicts_with_all = ["mean_zero", "mean_sample"], required_unless_present_any = ["mean_zero", "mean_sample"])]
        mean: Option<PathBuf>,
        /// Use the zero mean
        #[arg(long)]
        mean_zero: bool,
        /// Use the sample mean
        #[arg(long, conflicts_with = "mean_zero")]
        mean_sample: bool,
        /// Orthogonal projector onto the assumed range (matrix JSON); selects the fixed-range estimator
        #[arg(long)]
        projector: Option<PathBuf>,
    },
    /// Degenerate Gaussian density at a point
    Density {
        /// Point (JSON array)
        #[arg(long)]
        x: PathBuf,
        /// Mean (JSON array)
        #[arg(long)]
        mean: PathBuf,
        /// Covariance (matrix JSON)
        #[arg(long)]
        cov: PathBuf,
    },
    /// Draw samples as CSV
    Sample {
        #[arg(long)]
        cov: PathBuf,
        #[arg(long)]
        mean: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write CSV here; the JSON envelope then goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a finished command wants printed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub envelope: serde_json::Value,
    /// CSV rows for `sample`.
    pub csv: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    commands::dispatch(&cli.global, &cli.command)
}

pub fn render(value: &serde_json::Value, indent: Option<usize>) -> String {
    match indent {
        None => value.to_string(),
        Some(width) => {
            use serde::Serialize;
            let pad = vec![b' '; width];
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut buf = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            value.serialize(&mut ser).expect("JSON values always serialize");
            String::from_utf8(buf).expect("serde_json emits UTF-8")
        }
    }
}
