use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quswap_core::cli::{self, Cli, EXIT_BAD_INPUT};

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = match cli::run(&args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_INPUT);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &args.out {
        Some(path) => std::fs::write(path, &outcome.stdout),
        None => std::io::stdout().write_all(outcome.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_BAD_INPUT);
    }
    ExitCode::from(outcome.exit_code)
}
