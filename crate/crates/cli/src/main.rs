//! `supercheq`: experiment driver for the fingerprinting toolkit.
//!
//! Exit codes: 0 success, 2 configuration error, 3 capacity exceeded,
//! 4 internal invariant violated.

mod commands;
mod error;
mod family;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{bounds, ee_scan, ie_demo, noise_scan, smp};
use crate::error::{CliError, CliResult};
use crate::output::CommonArgs;

#[derive(Parser, Debug)]
#[command(name = "supercheq", version, about = "Quantum fingerprinting experiments and protocol sessions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Max pairwise fingerprint fidelity versus depth for random-circuit encodings.
    #[command(after_help = ee_scan::HELP)]
    EeScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write every fidelity matrix.
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Noisy density-matrix fingerprints of every k-bit seed file.
    #[command(after_help = noise_scan::HELP)]
    NoiseScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write every overlap matrix.
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Graph-state encoding of a file with scripted incremental edits.
    #[command(after_help = ie_demo::HELP)]
    IeDemo {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One simultaneous-message-passing session between two files.
    #[command(after_help = smp::HELP)]
    Smp {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Collision bounds and fingerprint size tables.
    #[command(after_help = bounds::HELP)]
    Bounds {
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::EeScan { common, .. }
            | Command::NoiseScan { common, .. }
            | Command::IeDemo { common }
            | Command::Smp { common }
            | Command::Bounds { common } => common,
        }
    }
}

fn configure_pool(jobs: Option<usize>) -> CliResult<()> {
    let Some(jobs) = jobs else {
        return Ok(());
    };
    if jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    let common = cli.command.common();
    let json = common.json;
    // configs are validated before any worker starts
    match &cli.command {
        Command::EeScan { emit_matrix, .. } => {
            let cfg = ee_scan::resolve(common, *emit_matrix)?;
            configure_pool(common.jobs)?;
            ee_scan::run(&cfg, json)
        }
        Command::NoiseScan { emit_matrix, .. } => {
            let cfg = noise_scan::resolve(common, *emit_matrix)?;
            configure_pool(common.jobs)?;
            noise_scan::run(&cfg, json)
        }
        Command::IeDemo { .. } => {
            let cfg = ie_demo::resolve(common)?;
            configure_pool(common.jobs)?;
            ie_demo::run(&cfg, json)
        }
        Command::Smp { .. } => {
            let cfg = smp::resolve(common)?;
            configure_pool(common.jobs)?;
            smp::run_and_write(&cfg, json)
        }
        Command::Bounds { .. } => {
            let cfg = bounds::resolve(common)?;
            configure_pool(common.jobs)?;
            bounds::run(&cfg, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
