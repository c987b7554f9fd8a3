use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use zstab::cli::{run, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.artifact),
        None => std::io::stdout().write_all(outcome.artifact.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write artifact: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    ExitCode::from(outcome.exit)
}
