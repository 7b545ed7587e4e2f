use std::process::ExitCode;

use clap::Parser;
use jumpga_cli::config::OUTPUT_DIR_ENV;
use jumpga_cli::{dispatch, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(Into::into);
    match dispatch(&cli, env_dir) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
