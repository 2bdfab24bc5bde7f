//! `firmdyn` — firm-dynamics engine front end.
//!
//! Exit codes: 0 on success (including an unstable verdict from the
//! `stability` command — that is a result, not a failure), 1 when a
//! computation or output write fails, 2 for usage and configuration errors.

// Validation guards are deliberately written `!(x > y)` so that NaN fails
// them; the positive comparison would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

/// Environment variable consulted when `--config` is not given.
const CONFIG_ENV: &str = "FIRMDYN_CONFIG";

/// Nonlinear firm dynamics: bifurcation sweeps, Lyapunov exponents,
/// cycle-driven control parameters, and firm stability verdicts.
#[derive(Debug, Parser)]
#[command(name = "firmdyn", version, after_help = config::reference())]
struct Cli {
    /// TOML configuration file; FIRMDYN_CONFIG is used when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the control parameter and export the attractor diagram.
    Bifurcate(commands::BifurcateArgs),
    /// Estimate largest Lyapunov exponents.
    Lyapunov(commands::LyapunovArgs),
    /// Trace a forcing source as a control-parameter schedule.
    Forcing(commands::ForcingArgs),
    /// Evaluate the eight-channel firm stability verdict.
    Stability(commands::StabilityArgs),
    /// Regenerate the standard figure set into a directory.
    Reproduce(commands::ReproduceArgs),
}

/// Command failure, split by who has to fix it.
#[derive(Debug)]
pub enum CliError {
    /// The invocation or configuration is wrong; exits with code 2.
    Usage(String),
    /// The run itself failed; exits with code 1.
    Runtime(String),
}

fn load_config(flag: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    if let Some(path) = flag {
        return RunConfig::load(path);
    }
    match std::env::var_os(CONFIG_ENV) {
        Some(path) => RunConfig::load(&PathBuf::from(path)),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = load_config(cli.config.as_ref())?;
    match &cli.command {
        Command::Bifurcate(args) => commands::bifurcate(&config, args),
        Command::Lyapunov(args) => commands::lyapunov(&config, args),
        Command::Forcing(args) => commands::forcing(&config, args),
        Command::Stability(args) => commands::stability(&config, args),
        Command::Reproduce(args) => commands::reproduce(&config, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
