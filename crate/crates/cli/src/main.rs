mod commands;
mod config;
mod output;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::RunConfig;
use output::Run;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "predissoc",
    version,
    about = "Predissociation at a level crossing: numerical experiments"
)]
struct Cli {
    /// JSON run configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated values of h, overriding the configuration.
    #[arg(long = "h", global = true, value_delimiter = ',')]
    h_list: Option<Vec<f64>>,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check the model assumptions clause by clause.
    ValidateModel,
    /// Ground level against Bohr-Sommerfeld quantization.
    Eigen,
    /// Complex-scaled resonance and overlap coefficient.
    Resonance,
    /// Kernel and operator norm scalings, Airy overlap.
    Kernels,
    /// Airy convolution identity and contour function.
    Identity,
    /// Survival amplitude against its predictor.
    Survive,
    /// Aggregate the manifests in the output directory.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::ValidateModel => "validate-model",
            Command::Eigen => "eigen",
            Command::Resonance => "resonance",
            Command::Kernels => "kernels",
            Command::Identity => "identity",
            Command::Survive => "survive",
            Command::Report => "report",
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(h) = cli.h_list {
        cfg.h_list = h;
    }
    let command = cli.command;
    let mut run = Run::new(cfg, command.name())?;
    let result = match command {
        Command::ValidateModel => commands::validate_model(&mut run),
        Command::Eigen => commands::eigen(&mut run),
        Command::Resonance => commands::resonance(&mut run),
        Command::Kernels => commands::kernels(&mut run),
        Command::Identity => commands::identity(&mut run),
        Command::Survive => commands::survive(&mut run),
        Command::Report => commands::report(&mut run),
    };
    let manifest = run.finish()?;
    for (name, check) in &manifest.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{name}: {status} ({})", check.summary);
    }
    result
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("PREDISSOC_LOG", "warn"))
        .init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
