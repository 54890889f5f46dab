//! `gecx`: batch front end for preprocessing, language models, evaluation,
//! n-best tuning and correction pipelines.

mod args;
mod commands;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// How a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag combinations (exit 1).
    Usage(String),
    /// Unreadable, malformed or inconsistent data (exit 2).
    Data(String),
}

impl From<gecx::Error> for Failure {
    fn from(e: gecx::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
