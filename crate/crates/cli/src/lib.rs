//! Command-line front end for `tfq-core`: signal synthesis, time-frequency
//! grids, verification reports and PGM rendering.

pub mod args;
pub mod commands;
pub mod error;
pub mod gridfile;
pub mod render;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::{CliError, CliResult};

/// Runs a parsed command line and returns the process exit code:
/// 0 when everything passed, 1 on a tolerance failure, 2 on bad input.
pub fn main_with(cli: Cli) -> i32 {
    let out = cli.out.clone();
    match run(cli) {
        Ok(Outcome::Written(_)) => 0,
        Ok(Outcome::Report(r)) => match commands::emit_report(&r, out.as_deref()) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
