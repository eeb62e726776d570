//! `ipm`: simulate, scan, check and sweep the dissipative IPM system.

// `!(x > 0.0)` is how NaN gets rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Global, Outcome};

/// Exit status contract.
const EXIT_INVALID: u8 = 1;
const EXIT_ABORT: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ipm",
    version,
    about = "Pseudo-spectral dissipative IPM simulator"
)]
struct Cli {
    /// Output root (default: `output_dir` from the config, then $IPM_OUT_DIR, then ./ipm-out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the random seed of the perturbation / operator battery
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Suppress progress output
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write its diagnostics
    Simulate(commands::simulate::Args),
    /// Measure decay rates of the 1-D fractional heat semigroup
    DecayScan(commands::decay::Args),
    /// Run the operator identity battery
    Opcheck(commands::opcheck::Args),
    /// Compare full and decomposed evolution of the same data
    Compare(commands::compare::Args),
    /// Run a parameter sweep declared with `sweep.<key> = a, b, ...`
    Sweep(commands::sweep::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = Global {
        out: cli.out,
        seed: cli.seed,
        quiet: cli.quiet,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(EXIT_INVALID);
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_ABORT);
        }
    };
    let workers = pool.current_num_threads();
    let result = pool.install(|| match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a, &global),
        Command::DecayScan(a) => commands::decay::run(a, &global),
        Command::Opcheck(a) => commands::opcheck::run(a, &global),
        Command::Compare(a) => commands::compare::run(a, &global),
        Command::Sweep(a) => commands::sweep::run(a, &global, workers),
    });
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Aborted(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(EXIT_ABORT)
        }
        Ok(Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_CHECK)
        }
        Ok(Outcome::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if commands::is_invalid(&e) {
                EXIT_INVALID
            } else {
                EXIT_ABORT
            })
        }
    }
}
