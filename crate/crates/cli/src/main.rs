use std::process::ExitCode;

use clap::Parser;
use rfh_cli::{execute_with_threads, threads_from_env, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads_from_env().and_then(|t| execute_with_threads(&cli, t)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
