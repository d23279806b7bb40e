mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use texreg_core::text::CacheKind;

/// Exit code 2 for configuration and validation problems, 1 for everything
/// else.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<texreg_core::Error> for CliError {
    fn from(e: texreg_core::Error) -> Self {
        match e {
            texreg_core::Error::Config(m) => CliError::Config(m),
            other => CliError::Runtime(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "texreg",
    version,
    about = "Text-regularized TransE training and link-prediction evaluation"
)]
struct Cli {
    /// Run configuration file (`key = value` per line).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a configuration entry; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Single-threaded training. Evaluation and cache precomputation give
    /// identical results either way.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Precompute a pair-similarity cache (cooccurrence, rwmd, tfidf, rank).
    Prep {
        #[arg(value_parser = parse_kind)]
        kind: CacheKind,
    },
    /// Train embeddings and write a checkpoint plus a per-epoch loss log.
    Train,
    /// Evaluate a checkpoint on the test split.
    Eval,
    /// Print graph and corpus size statistics.
    Stats,
}

fn parse_kind(s: &str) -> Result<CacheKind, String> {
    s.parse().map_err(|e: texreg_core::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = config::RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    match cli.command {
        Command::Prep { kind } => commands::prep(kind, &config, cli.deterministic),
        Command::Train => commands::train(&config, cli.deterministic),
        Command::Eval => commands::eval(&config, cli.deterministic),
        Command::Stats => commands::stats(&config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("texreg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
