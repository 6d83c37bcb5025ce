use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chaosembed_core::embed::DEFAULT_BUDGET;
use chaosembed_core::{Claim, ScheduleMode};

#[derive(Debug, Parser)]
#[command(name = "chaosembed", version, about = "Graph coverings with a dense uniformly chaotic set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the input is a covering and that every level is irreducible.
    Validate(ValidateArgs),
    /// Build the explicit tower and check the construction.
    Build(BuildArgs),
    /// Run one or all of the chaos checks and print witness reports.
    Verify(VerifyArgs),
    /// Print the strict and relaxed level schedules.
    Schedule(ScheduleArgs),
    /// Push a thread prefix forward and print its orbit.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    FixedPoint,
    Odometer,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Built-in covering.
    #[arg(long = "gen", value_enum)]
    pub generator: Option<Generator>,
    /// Covering file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Lengths {
    /// Length of the first connector path at level 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub l11: u64,
    /// Length of the second connector path at level 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub l21: u64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: Input,
    /// Levels to materialize for a built-in covering.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[command(flatten)]
    pub lengths: Lengths,
    /// Largest vertex count of one explicit level.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Directory for `level_<n>.dot` files.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimArg {
    All,
    One(Claim),
}

fn parse_claim(s: &str) -> Result<ClaimArg, String> {
    if s == "all" {
        return Ok(ClaimArg::All);
    }
    s.parse().map(ClaimArg::One).map_err(|_| {
        let ids: Vec<&str> = Claim::ALL.iter().map(|c| c.id()).collect();
        format!("expected `all` or one of {}", ids.join(", "))
    })
}

fn parse_mode(s: &str) -> Result<ScheduleMode, String> {
    s.parse().map_err(|_| "expected `strict` or `relaxed`".to_string())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_parser = parse_claim)]
    pub claim: ClaimArg,
    #[arg(long, value_parser = parse_mode, default_value = "relaxed")]
    pub mode: ScheduleMode,
    /// Deeper level for pattern and translation checks.
    #[arg(long)]
    pub m: Option<usize>,
    /// Resolution level.
    #[arg(long)]
    pub n: Option<usize>,
    /// Schedule stage.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Index of the Cantor set.
    #[arg(long = "big-n", default_value_t = 1)]
    pub big_n: usize,
    /// First level of the schedule.
    #[arg(long, default_value_t = 1)]
    pub n0: usize,
    /// Explicit levels for construction checks.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[command(flatten)]
    pub lengths: Lengths,
    /// Random sample points on top of cylinder ends and midpoints.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub n0: usize,
    #[command(flatten)]
    pub lengths: Lengths,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: Input,
    /// Top vertex of the prefix: `H`, `F:<v>`, `p1:<j>` or `p2:<j>`.
    #[arg(long, default_value = "H")]
    pub thread: String,
    #[arg(long)]
    pub steps: usize,
    /// Level of the top vertex.
    #[arg(long)]
    pub depth: usize,
    #[command(flatten)]
    pub lengths: Lengths,
}
