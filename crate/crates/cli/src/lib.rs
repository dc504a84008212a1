//! Command-line front end of `hypgas-core`.
//!
//! The binary is a thin wrapper around [`run`]; the report types live in
//! [`report`] so that tests and downstream tools can parse the output.

pub mod args;
mod commands;
pub mod report;

use std::fmt;
use std::path::Path;

use anyhow::Context;
use hypgas_core::Potential;

use crate::args::Command;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// A certificate was not obtained or a verification check failed.
pub const EXIT_NOT_CERTIFIED: i32 = 1;
/// Command line or input file could not be parsed or is invalid.
pub const EXIT_USAGE: i32 = 2;
/// Internal numerical failure.
pub const EXIT_NUMERIC: i32 = 3;

/// Invalid input detected by the front end itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Rendered report and the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

pub fn run(command: &Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Scatter(a) => commands::scatter(a),
        Command::Bound(a) => commands::bound(a),
        Command::Certify(a) => commands::certify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify(a),
    }
}

/// Maps an error to the documented exit status.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<hypgas_core::Error>() {
            return if e.is_numeric() { EXIT_NUMERIC } else { EXIT_USAGE };
        }
        if cause.is::<UsageError>() || cause.is::<serde_json::Error>() || cause.is::<std::io::Error>() {
            return EXIT_USAGE;
        }
    }
    EXIT_NUMERIC
}

pub fn read_potential(path: &Path) -> anyhow::Result<Potential> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing potential {}", path.display()))
}

/// Worker pool honoring `HYPGAS_THREADS`.
pub(crate) fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("HYPGAS_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("HYPGAS_THREADS = `{raw}` must be a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().context("starting worker threads")
}
