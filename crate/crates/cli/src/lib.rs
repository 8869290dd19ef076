//! Command-line front end for `sobofit`: fit configs, coefficient files,
//! plot-ready CSV and error comparison tables.

pub mod coeffs;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "sobofit", version, about = "Sobolev-weighted polynomial approximation")]
struct Cli {
    /// Suppress the fit summary.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the polynomial described by a config and write its coefficient file.
    Fit { config: PathBuf },

    /// Print CSV of a target and fitted polynomials on a uniform grid.
    Sample {
        #[arg(required = true)]
        coeffs: Vec<PathBuf>,
        /// Builtin name (relu, abs, sigmoid, tanh) or a config file.
        #[arg(long)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        step: f64,
    },

    /// Report per-order L2 residuals, grid max error and weighted cost.
    Compare {
        config: PathBuf,
        #[arg(required = true)]
        coeffs: Vec<PathBuf>,
        /// Emit CSV instead of an aligned table.
        #[arg(long)]
        csv: bool,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                1
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let outcome = match &cli.command {
        Command::Fit { config } => commands::cmd_fit(config, cli.quiet, stdout),
        Command::Sample { coeffs, target, from, to, step } => {
            commands::cmd_sample(coeffs, target, *from, *to, *step, stdout)
        }
        Command::Compare { config, coeffs, csv } => commands::cmd_compare(config, coeffs, *csv, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "sobofit: {e}");
            e.exit_code()
        }
    }
}
