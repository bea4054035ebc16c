use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use switchctl::commands::{AnalyzeOptions, OracleOptions, EXIT_INPUT_ERROR};
use switchctl::{analyze, gen, oracle, GenParams};
use switchctl_core::switched::{DEFAULT_BOUND, DEFAULT_ENUMERATION_CAP, DEFAULT_TRIALS};

/// Structural controllability of leader-follower networks under switching
/// topologies.
#[derive(Parser, Debug)]
#[command(name = "switchctl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide structural controllability of a network document.
    ///
    /// Exit status: 0 controllable, 1 uncontrollable, 2 input error.
    Analyze {
        file: PathBuf,
        /// Attach an exact-rank certificate from random weights.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Weights are drawn from [1, BOUND].
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long)]
        json: bool,
        /// Also build the explicit switched controllability matrix.
        #[arg(long)]
        enumerate: bool,
        /// Column cap for --enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Cross-check fast paths against brute-force oracles.
    ///
    /// Exit status: 0 all agree, 1 disagreement, 2 input error or cap exceeded.
    Oracle {
        file: PathBuf,
        /// Cap on enumerated columns and on permutations.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded random network document.
    Gen {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        leaders: usize,
        #[arg(long)]
        snapshots: usize,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            file,
            certify,
            seed,
            trials,
            bound,
            json,
            enumerate,
            cap,
        } => analyze(
            &file,
            &AnalyzeOptions {
                certify,
                seed,
                trials,
                bound,
                json,
                enumerate,
                cap,
            },
        ),
        Command::Oracle {
            file,
            cap,
            seed,
            bound,
            json,
        } => oracle(&file, &OracleOptions { cap, seed, bound, json }),
        Command::Gen {
            agents,
            leaders,
            snapshots,
            edge_prob,
            seed,
        } => gen(&GenParams {
            agents,
            leaders,
            snapshots,
            edge_prob,
            seed,
        }),
    };

    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
