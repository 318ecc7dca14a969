mod args;
mod backend;
mod commands;
mod config;
mod error;
mod render;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use tracing_subscriber::filter::LevelFilter;

use crate::args::{Cli, Command};
use crate::config::RunConfig;
use crate::error::{CliError, EXIT_USAGE, EXIT_VERDICT};

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match &cli.command {
        Command::Verify(a) => commands::verify(&cfg, a),
        Command::Eval(a) => commands::eval(&cfg, a),
        Command::GenerateEvalset(a) => commands::generate_evalset(&cfg, a),
        Command::Calibrate(a) => commands::calibrate(&cfg, a),
        Command::Baselines(a) => commands::baselines(&cfg, a),
        Command::Bench(a) => commands::bench(&cfg, a),
    }
}

/// `VERITAS_LOG` (error, warn, info, debug, trace, off); warn by default.
fn log_level() -> LevelFilter {
    std::env::var("VERITAS_LOG").ok().and_then(|v| v.parse().ok()).unwrap_or(LevelFilter::WARN)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    tracing_subscriber::fmt()
        .with_max_level(log_level())
        .with_ansi(std::io::stderr().is_terminal())
        .with_writer(std::io::stderr)
        .init();
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(EXIT_VERDICT)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
