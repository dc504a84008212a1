use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hypgas_cli::args::{Cli, Command};
use hypgas_cli::{exit_code, run, EXIT_USAGE};

fn out_path(command: &Command) -> Option<&std::path::Path> {
    let output = match command {
        Command::Scatter(a) => &a.output,
        Command::Bound(a) => &a.output,
        Command::Certify(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Verify(a) => &a.output,
    };
    output.out.as_deref()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(exit_code(&err) as u8);
        }
    };
    let written = match out_path(&cli.command) {
        Some(path) => std::fs::write(path, &outcome.output),
        None => std::io::stdout().lock().write_all(outcome.output.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: writing report: {err}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.status as u8)
}
