use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use chaosembed_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = chaosembed_cli::run(&cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(outcome.status)
}
