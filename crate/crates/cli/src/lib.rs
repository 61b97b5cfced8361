//! Command-line harness: timing runs, sweeps, convergence traces, dataset
//! download and verification, all emitting CSV.

pub mod args;
pub mod commands;
pub mod error;
pub mod fetch;
pub mod rows;

use args::{Cli, Command};
use error::CliError;

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Trace(a) => commands::trace(a),
        Command::Fetch(a) => fetch::fetch(a),
        Command::Verify(a) => commands::verify_cmd(a),
    }
}
