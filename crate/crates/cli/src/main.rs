mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Opts;

/// Seeded experiments on quantum group actions.
#[derive(Parser)]
#[command(name = "qgalab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a group element, key or state
    Sample(Opts),
    /// Run a security game and report its estimate
    Game(Opts),
    /// Measure multi-bit SKE correctness
    SkeRoundtrip(Opts),
    /// Evaluate the NR state generator or one of its hybrid oracles
    PrfsgEval(Opts),
    /// Mint, verify and counterfeit banknotes
    MoneyDemo(Opts),
    /// Check a classical group action and its NR PRF
    EgaCheck(Opts),
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

/// Library errors raised while resolving a config are validation errors;
/// the commands wrap anything raised later as runtime errors.
impl From<qgalab::Error> for CliError {
    fn from(e: qgalab::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type Handler = fn(&Opts) -> Result<String, CliError>;

fn execute(command: Command) -> Result<(), CliError> {
    let (opts, f): (Opts, Handler) = match command {
        Command::Sample(o) => (o, commands::sample),
        Command::Game(o) => (o, commands::game),
        Command::SkeRoundtrip(o) => (o, commands::ske_roundtrip),
        Command::PrfsgEval(o) => (o, commands::prfsg_eval),
        Command::MoneyDemo(o) => (o, commands::money_demo),
        Command::EgaCheck(o) => (o, commands::ega_check),
    };
    let opts = opts.load()?;
    let output = f(&opts)?;
    match &opts.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(output.as_bytes()).map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
