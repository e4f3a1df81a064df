//! Command-line front end for the boundkde library.
//!
//! `run` is the whole program: it parses argv, optionally pins the worker
//! pool size (the `BOUNDKDE_THREADS` environment variable; 0 or unset means
//! automatic), executes the subcommand, and returns the process exit code.
//! All output is deterministic given argv, input files, and seeds,
//! independent of the thread count.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod model;

use args::Cli;
use clap::Parser;
use error::CliError;
use std::ffi::OsString;

/// Entry point used by `main`; thread count comes from the environment.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let threads = std::env::var("BOUNDKDE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k > 0);
    run_with_threads(argv, threads)
}

/// Entry point with an explicit worker count (used by tests to compare
/// thread settings within one process).
pub fn run_with_threads<I, T>(argv: I, threads: Option<usize>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            let is_usage = e.use_stderr();
            let _ = e.print();
            return if is_usage { 2 } else { 0 };
        }
    };
    let result = match threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| commands::dispatch(cli.command)),
            Err(e) => Err(CliError::Internal(e.to_string())),
        },
        None => commands::dispatch(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
