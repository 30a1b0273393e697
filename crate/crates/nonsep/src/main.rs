//! Command-line interface for the two-atom interference engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nonsep::config::load_config;
use nonsep::runner::{resolve, run, CliOverrides, RunError};

#[derive(Parser)]
#[command(
    name = "nonsep",
    version,
    about = "Absorption and emission interference for two-atom non-product states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-photon absorption probabilities of a path-entangled pair
    EntangledAbsorption(JobArgs),
    /// Emission-probability curve of a path-entangled pair over time
    EntangledEmission(JobArgs),
    /// Identical-pair absorption with the full interference-term breakdown
    IdenticalAbsorption(JobArgs),
    /// Two-photon emission probability of an identical pair
    IdenticalEmission(JobArgs),
    /// Default emission curve: one fast and one slow atom, unit non-transition elements
    Fig1(JobArgs),
    /// Absorption sweep against the initial mode overlap, boson and fermion columns
    Fig2(JobArgs),
    /// Random equivalence campaign between closed forms and brute force
    Verify(JobArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &JobArgs) {
        match self {
            Command::EntangledAbsorption(a) => ("entangled-absorption", a),
            Command::EntangledEmission(a) => ("entangled-emission", a),
            Command::IdenticalAbsorption(a) => ("identical-absorption", a),
            Command::IdenticalEmission(a) => ("identical-emission", a),
            Command::Fig1(a) => ("fig1", a),
            Command::Fig2(a) => ("fig2", a),
            Command::Verify(a) => ("verify", a),
        }
    }
}

#[derive(Args)]
struct JobArgs {
    /// JSON scenario file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Detection-side lifetime
    #[arg(long)]
    tau_a: Option<f64>,
    /// Far-side lifetime
    #[arg(long)]
    tau_b: Option<f64>,
    /// Evaluation grid as start:stop:steps
    #[arg(long)]
    x_grid: Option<String>,
    /// Comma-separated excited-mode overlap values
    #[arg(long)]
    tilde_overlap: Option<String>,
    /// Exchange statistics: boson, fermion, or distinguishable
    #[arg(long)]
    stats: Option<String>,
    /// Campaign seed
    #[arg(long)]
    seed: Option<u64>,
    /// Campaign trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(subcommand: &str, args: &JobArgs) -> Result<(), RunError> {
    let config = match &args.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    let overrides = CliOverrides {
        tau_a: args.tau_a,
        tau_b: args.tau_b,
        x_grid: args.x_grid.clone(),
        tilde_overlap: args.tilde_overlap.clone(),
        stats: args.stats.clone(),
        seed: args.seed,
        trials: args.trials,
        out: args.out.clone(),
    };
    let resolved = resolve(subcommand, config, &overrides)?;
    for warning in &resolved.warnings {
        eprintln!("warning: {warning}");
    }
    let outcome = run(&resolved.job, resolved.out.as_deref())?;
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    if let Some(text) = &outcome.stdout {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let line =
                rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    let (name, args) = cli.command.parts();
    match execute(name, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
