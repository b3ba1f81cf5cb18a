mod args;
mod commands;
mod output;
mod validate;

use std::process::ExitCode;

use clap::Parser;
use spinon_core::Error;

use crate::args::{Cli, Command};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
    Io(String, std::io::Error),
    /// Validation ran but some checks failed.
    Failed(Vec<String>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(msg) => CliError::Usage(msg),
            e @ Error::SizeLimit { .. } => CliError::Usage(e.to_string()),
            e => CliError::Numeric(e),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ground(a) => commands::ground(a),
        Command::Excite(a) => commands::excite(a),
        Command::Ff(a) => commands::ff(a),
        Command::Tdl(a) => commands::tdl(a),
        Command::Converge(a) => commands::converge(a),
        Command::Validate(a) => validate::validate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("numeric failure: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(CliError::Io(what, e)) => {
            eprintln!("i/o error on {what}: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(CliError::Failed(checks)) => {
            eprintln!("{} check(s) failed:", checks.len());
            for c in checks {
                eprintln!("  {c}");
            }
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
