//! `hadamard`: sweeps, rail reports and mesh compilation from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad configuration or input,
//! 3 numerical failure. Output files are written only when a command
//! succeeds.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CircuitArgs, DecomposeArgs, RailsArgs};

#[derive(Parser, Debug)]
#[command(name = "hadamard", version, about = "Two-photon interference in a polarization-encoded H4 network")]
struct Cli {
    /// Overrides the seed in the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// JSON sweep configuration (schema 1).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate coincidence fringes and fit them: fringes.csv, fit.csv.
    FringeSweep,
    /// Simulate single-photon traces and their flatness: singles.csv, rse.csv.
    SinglesSweep,
    /// Print rail unitaries and geometric phases: rails.csv.
    Rails(RailsArgs),
    /// Compile a unitary into a beamsplitter mesh: plan.json.
    Decompose(DecomposeArgs),
    /// Build a transfer matrix and export it: unitary.txt.
    Circuit(CircuitArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::FringeSweep => commands::fringe_sweep(config, cli.seed),
        Command::SinglesSweep => commands::singles_sweep(config, cli.seed),
        Command::Rails(args) => commands::rails(args),
        Command::Decompose(args) => commands::decompose(args),
        Command::Circuit(args) => commands::circuit(args),
    };
    match result.and_then(|(outputs, text)| outputs.write(&cli.out).map(|()| text)) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
