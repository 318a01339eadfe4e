//! `coop-emission`: spectra, decay rates and oracle validation from a JSON
//! run configuration.
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid input,
//! 3 oracle non-convergence, 4 closed form outside the validation tolerance.

mod config;
mod error;
mod output;
mod plot;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig, Task};
use error::CliError;

#[derive(Parser)]
#[command(name = "coop-emission", version, about = "Two-atom emission near an oscillating mirror")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emitted spectrum on a detuning grid.
    Spectrum(Args),
    /// Collective decay rate at the configured positions.
    Decay(Args),
    /// Collective decay rate as atom B moves along the mirror normal.
    DecaySweep(Args),
    /// Closed-form spectrum against the quadrature oracle.
    Validate(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (overrides output.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output path (overrides output.plot).
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "COOP_EMISSION_THREADS")]
    threads: Option<usize>,
    /// Relative agreement required by `validate`.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Grid, sweep or validation point count.
    #[arg(long)]
    points: Option<usize>,
}

fn execute(task: Task, args: Args) -> Result<(), CliError> {
    let overrides = Overrides { out: args.out, plot: args.plot, tolerance: args.tolerance, points: args.points };
    let cfg = RunConfig::load(&args.config)?.resolve(task, &overrides)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Invalid("threads must be >= 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Numerics(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| tasks::run(&cfg))?;

    for (path, text) in &outcome.files {
        output::write_file(path, text)?;
    }
    if let (Some(path), Some(svg)) = (&cfg.output.plot, &outcome.plot) {
        output::write_file(path, svg)?;
    }
    println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("summary serializes"));
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match cli.command {
        Command::Spectrum(a) => (Task::Spectrum, a),
        Command::Decay(a) => (Task::Decay, a),
        Command::DecaySweep(a) => (Task::DecaySweep, a),
        Command::Validate(a) => (Task::Validate, a),
    };
    match execute(task, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
