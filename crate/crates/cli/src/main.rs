mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Context;

/// Each variant maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl From<interdep_core::Error> for Failure {
    fn from(e: interdep_core::Error) -> Self {
        let text = e.to_string();
        if e.is_data_error() {
            Failure::Data(text)
        } else if e.is_usage_error() {
            Failure::Usage(text)
        } else {
            Failure::Internal(text)
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Internal(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Measures(a) => commands::measures(&ctx, a),
        Command::Infer(a) => commands::infer(&ctx, a),
        Command::Complexity(a) => commands::complexity(&ctx, a),
        Command::Experiment(a) => commands::experiment(&ctx, a),
        Command::Baseline(a) => commands::baseline(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("interdep: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("interdep: {}", f.message().replace('\n', " "));
            ExitCode::from(f.code())
        }
    }
}
