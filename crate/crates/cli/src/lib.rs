//! Command-line front end for `timeflow-core`.
//!
//! Each subcommand runs one experiment and writes a single CSV or JSON
//! artifact (to `--output` or stdout) plus a one-line summary. Exit status
//! is 0 on success, 1 for rejected input and 2 when a numerical contract
//! fails (truncation, boundary contact, aliasing, undefined phase).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

pub mod args;
mod commands;
pub mod report;

pub use commands::{execute, Artifact};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] timeflow_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &args::Cli) -> Result<(), CliError> {
    let artifact = execute(&cli.command)?;
    if let (Some(path), Some(curve)) = (curve_path(&cli.command), &artifact.curve) {
        write_file(path, curve)?;
    }
    match &cli.output {
        Some(path) => {
            write_file(path, &artifact.body)?;
            println!("{}", artifact.summary);
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(artifact.body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            eprintln!("{}", artifact.summary);
        }
    }
    Ok(())
}

fn curve_path(command: &args::Command) -> Option<&Path> {
    match command {
        args::Command::PolarizerFit { curve_output, .. } => curve_output.as_deref(),
        _ => None,
    }
}
