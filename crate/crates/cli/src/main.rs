//! `dhym`: run the continuation solver, the lemma harness, or a phase report.

mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;
use failure::{EXIT_FAILURE, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "dhym",
    version,
    about = "dHYM continuation solver on flat complex 3-tori"
)]
struct Cli {
    /// Cap on worker threads; 1 runs every kernel sequentially.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continue from t = 0 to t = 1 and verify the final potential.
    Solve {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Run every randomized inequality check; exits 0 iff all pass.
    CheckLemmas {
        /// Sample spec JSON; defaults are used when omitted.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
        #[arg(long, value_name = "N")]
        count: Option<usize>,
    },
    /// Print θ̂, the path constants and the subsolution margins.
    Phase {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = dhym_core::exec::limit_threads(n) {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match &cli.command {
        Command::Solve { config, out } => commands::solve(config, out),
        Command::CheckLemmas {
            config,
            out,
            seed,
            count,
        } => commands::check_lemmas(config.as_deref(), out, *seed, *count),
        Command::Phase { config } => commands::phase(config),
    };
    match result {
        Ok(Outcome::Done(code)) => ExitCode::from(code),
        Ok(Outcome::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
