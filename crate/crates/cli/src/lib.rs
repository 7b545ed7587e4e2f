//! Command-line driver for the jumpga experiments: argument and config
//! handling, and the CSV, JSON and SVG emitters.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::path::PathBuf;

pub use args::Cli;
pub use commands::{execute, plan, Job, Outcome};
pub use config::{resolve, Command, ConfigFile, Settings};
pub use error::{CliError, Result};

/// Exit status when a sweep cell fails its bound.
pub const EXIT_BOUND_FAILED: u8 = 3;

/// Resolves, validates and executes a parsed invocation. Returns the exit
/// status for a successful run.
pub fn dispatch(cli: &Cli, env_output_dir: Option<PathBuf>) -> Result<u8> {
    let cmd = cli.command.command();
    let file = cli
        .command
        .config_path()
        .map(|p| ConfigFile::load(p))
        .transpose()?;
    let settings = resolve(cmd, file.as_ref(), env_output_dir, cli.command.flags())?;
    let job = plan(cmd, &settings)?;
    let (n, k) = job.gap_size();
    if 4 * k > n {
        eprintln!(
            "warning: k = {k} exceeds n/4 = {}; the runtime bounds assume a small gap",
            n as f64 / 4.0
        );
    }
    let outcome = execute(cmd, &settings, &job)?;
    if let Some(dir) = settings.output_dir.as_ref() {
        eprintln!("wrote {} files to {}", outcome.files.len(), dir.display());
    }
    if outcome.failed_cells > 0 {
        eprintln!("{} sweep cells failed their bound", outcome.failed_cells);
    }
    Ok(exit_status(&outcome))
}

fn exit_status(outcome: &Outcome) -> u8 {
    if outcome.failed_cells > 0 {
        EXIT_BOUND_FAILED
    } else {
        0
    }
}
