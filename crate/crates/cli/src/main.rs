//! `sqg`: kernel tables, simulations, verification reports and special
//! functions from the command line.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on usage,
//! configuration or input errors.

mod checks;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "sqg", version, about = "Dissipative SQG solver and stable-kernel toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate p(1, r) for one α and write the profile plus an estimate sweep.
    Kernel {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a simulation described by a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate checks on a run directory and write report.csv.
    Verify {
        run_dir: PathBuf,
        /// Comma-separated subset of: ratio, limits, gradient, slope, riesz_slope,
        /// max_principle, mass, riesz_limits, two_sided.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Kernel profile used for the two-sided estimate check.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Report directory; defaults to the run directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Special functions and singular integrals as CSV.
    Special {
        #[command(subcommand)]
        which: commands::Special,
        /// Output file; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Power-law fit of one diagnostics column.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "linf")]
        quantity: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, num_args = 2, value_names = ["T_A", "T_B"])]
        range: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Checks,
    Error(String),
}

impl From<sqg_core::Error> for Failure {
    fn from(e: sqg_core::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernel { alpha, out, r_max, tol } => commands::kernel(alpha, &out, r_max, tol),
        Command::Simulate { config, out, seed } => commands::simulate(&config, out, seed),
        Command::Verify {
            run_dir,
            checks,
            profile,
            out,
        } => checks::verify(&run_dir, checks, profile.as_deref(), out.as_deref()),
        Command::Special { which, out } => commands::special(which, out.as_deref()),
        Command::Fit {
            csv,
            quantity,
            alpha,
            range,
            tol,
        } => commands::fit(&csv, &quantity, alpha, range, tol),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
