use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use rem_cli::commands::{self, RunContext};
use rem_cli::config::{Overrides, RunConfig, CONFIG_ENV};
use rem_cli::{configure_threads, CliError};

/// Relational event models for signed actor-belief statement sequences.
#[derive(Parser)]
#[command(name = "rem", version = rem_core::VERSION)]
struct Cli {
    /// Run configuration (TOML); defaults to $REM_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override run.threads (0 = automatic, 1 = reference mode).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the decay half-life (clears any sweep list).
    #[arg(long, global = true)]
    half_life: Option<f64>,

    /// Override the burn-in cutoff date (YYYY-MM-DD).
    #[arg(long, global = true)]
    cutoff: Option<NaiveDate>,

    /// Override run.output_dir.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the corpus and write summary artifacts.
    Ingest,
    /// Build the design matrices and write them as CSV.
    Stats,
    /// Fit the rate model (conditional logit over daily risk sets).
    FitRate,
    /// Fit the type model (logistic regression for stance).
    FitType,
    /// Simulate the prediction window from the fitted models.
    Simulate,
    /// Simulate and score goodness of fit against a uniform baseline.
    Gof,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Usage(format!("pass --config PATH or set {CONFIG_ENV}"))
        })?;
    let (mut config, config_text) = RunConfig::load(&config_path)?;
    config.apply_overrides(&Overrides {
        seed: cli.seed,
        threads: cli.threads,
        half_life: cli.half_life,
        cutoff: cli.cutoff,
        output_dir: cli.output_dir,
    });
    config.validate()?;
    configure_threads(config.run.threads)?;

    let ctx = RunContext::new(config, config_text)?;
    match cli.command {
        Command::Ingest => commands::cmd_ingest(&ctx),
        Command::Stats => commands::cmd_stats(&ctx),
        Command::FitRate => commands::cmd_fit_rate(&ctx),
        Command::FitType => commands::cmd_fit_type(&ctx),
        Command::Simulate => commands::cmd_simulate(&ctx),
        Command::Gof => commands::cmd_gof(&ctx),
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
