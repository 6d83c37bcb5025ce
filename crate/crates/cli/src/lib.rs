//! Command-line front end for `chaosembed-core`.

pub mod args;
pub mod commands;
pub mod covfile;
pub mod dot;

pub use commands::Outcome;

use args::{Cli, Command};

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::Schedule(a) => commands::schedule(a),
        Command::Simulate(a) => commands::simulate(a),
    }
}
