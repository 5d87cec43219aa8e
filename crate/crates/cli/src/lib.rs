//! Command-line front end: argument parsing, file output and exit codes.

pub mod args;
pub mod commands;
mod svg;
mod table;

use anyhow::Result;

pub use args::{Cli, Command};
pub use commands::Outcome;

pub const EXIT_SUCCESS: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_ORACLE_FAILED: u8 = 3;

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Fit(a) => commands::fit(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Coherence(a) => commands::coherence(a),
        Command::PredictBlocked(a) => commands::predict_blocked(a),
    }
}

/// Precondition failures exit with 2; every other error with 1.
pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(Outcome::Success) => EXIT_SUCCESS,
        Ok(Outcome::OracleFailed) => EXIT_ORACLE_FAILED,
        Err(e) => match e.downcast_ref::<pilotwave_core::Error>() {
            Some(pilotwave_core::Error::Precondition(_)) => EXIT_PRECONDITION,
            _ => EXIT_VALIDATION,
        },
    }
}
