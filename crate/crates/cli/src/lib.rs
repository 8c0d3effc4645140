//! Command-line front end: analysis, simulation, optimization, parameter
//! sweeps and figure data, all written as CSV.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod sweep;
pub mod table;

pub use args::{Cli, Command};
pub use error::{CliError, Result};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RFH_THREADS";

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::Figure(a) => figures::figure(a.id, &a.out, &a.sim).map(|_| ()),
    }
}

/// Runs `cli` on a pool of at most `threads` workers (all cores if `None`).
pub fn execute_with_threads(cli: &Cli, threads: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n.max(1));
        }
        let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| execute(cli))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        execute(cli)
    }
}

pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}
