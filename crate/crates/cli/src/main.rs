//! `nashrand`: generate family games, solve and verify them, scan closed
//! forms across dimensions, and run the exact sampler.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nashrand", version, about = "Exact Nash equilibria and the randomness they need")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Output {
    /// Output format; tables default to csv, reports to json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct Limits {
    /// Largest dimension handed to full support enumeration.
    #[arg(long, env = "NASHRAND_MAX_N", default_value_t = nashrand_core::ne::DEFAULT_MAX_N)]
    pub max_n: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a game file for a named family.
    Gen {
        /// beta | primeblock | permutation | constsum-beta | constsum-primeblock | example1 | example2
        family: String,
        /// Dimension (beta, permutation) or number of primes (primeblock).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate equilibria and report their complexities.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        output: Output,
    },
    /// Check a profile against a game, optionally under capability limits.
    Verify {
        input: PathBuf,
        profile: PathBuf,
        #[arg(long)]
        c1: Option<String>,
        #[arg(long)]
        c2: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form complexities across a range of parameters.
    Scan {
        family: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Recurrence table with the identities checked row by row.
    Recurrence {
        #[arg(long, default_value_t = 40)]
        to: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Draw seeded samples from a distribution file.
    Sample {
        dist: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Mass resolved by the first `depth` levels of the sampling tree.
    Analyze {
        dist: PathBuf,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Explicit complexity upper bounds, with measured values when solvable.
    Bound {
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { family, n, out } => commands::gen(&family, n, out.as_deref()),
        Command::Solve { input, limits, output } => commands::solve(&input, limits, &output),
        Command::Verify { input, profile, c1, c2, output } => {
            commands::verify(&input, &profile, c1.as_deref(), c2.as_deref(), &output)
        }
        Command::Scan { family, from, to, output } => commands::scan(&family, from, to, &output),
        Command::Recurrence { to, output } => commands::recurrence(to, &output),
        Command::Sample { dist, count, seed, output } => commands::sample(&dist, count, seed, &output),
        Command::Analyze { dist, depth, output } => commands::analyze(&dist, depth, &output),
        Command::Bound { input, limits, output } => commands::bound(&input, limits, &output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
