//! `drce`: robust cost estimates for linear systems and Markov chains with
//! uncertain stopping times.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod model;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Invalid user input; exits with status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Naive,
    Sabs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Sir,
    Svir,
    Csoc,
}

#[derive(Parser)]
#[command(name = "drce", version, about = "Robust and distributionally robust cost estimates under uncertain stopping times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Reduce a Markov model to its stable system on the hyperplane.
    Convert {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst single stopping time within a finite horizon.
    Rce {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "sabs")]
        algo: Algo,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst expected cost over a Wasserstein ball around a nominal horizon distribution.
    Drce {
        #[arg(long)]
        model: PathBuf,
        /// CSV with columns `t,probability`.
        #[arg(long)]
        nominal: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value = "sabs")]
        algo: Algo,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst stopping time over an unbounded horizon.
    RceInf {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst expected cost over geometric stopping times near `Geom(rho)`.
    DrceGeom {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nominal versus robust cost on a built-in scenario.
    Scenario {
        #[arg(value_enum)]
        name: Scenario,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Ball radius; defaults to 16 for csoc and 1 for the epidemic models.
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Timings of sequential versus strided cost sequences, and of full versus reduced powering.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1024)]
        horizon: usize,
        #[arg(long, default_value_t = 1_000_000)]
        power: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
