//! Command-line front end for the modified error function.
//!
//! Exit codes: 0 success under the contraction guarantee, 2 success without
//! it (`M(δ,γ) ≥ 1`), 1 failure.

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "moderf",
    version,
    about = "Modified error function Φ_δγ: solve, verify, scan"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Picard,
    Shooting,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelfTest {
    Corrupt,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Odd number of grid points.
    #[arg(long, default_value_t = 2001)]
    pub grid_points: usize,
    /// Truncation point of the half-line; derived from (δ,γ) when omitted.
    #[arg(long)]
    pub xmax: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for Φ_δγ and write `x,phi` samples.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "picard")]
        method: MethodArg,
        #[command(flatten)]
        common: Common,
    },
    /// Scan M(δ,γ) on a lattice and trace the boundary M = 1.
    Region {
        #[arg(long, default_value_t = -0.9, allow_hyphen_values = true)]
        delta_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        delta_max: f64,
        #[arg(long, default_value_t = -0.9, allow_hyphen_values = true)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma_max: f64,
        /// Lattice points per axis.
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// Boundary curve file; `<output stem>_boundary.<ext>` by default.
        #[arg(long)]
        boundary_output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check bounds, monotonicity, concavity and residuals of both solvers.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Corrupt the solutions before checking (the run must fail).
        #[arg(long, value_enum)]
        selftest: Option<SelfTest>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve with both methods and report their difference.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve γΦ(λ) = α, δΦ(λ) = β for (δ, γ).
    Stefan {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::Status::Failed as u8)
        }
    }
}
