//! Command-line front end: analyze task-set files with any registered
//! test, run acceptance-ratio sweeps over generated sets, and solve the
//! named constants.
//!
//! Exit codes: 0 when every analyzed task is accepted, 1 when any task is
//! rejected (including not-applicable results), 2 on usage, parse, or
//! validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod analyze;
mod sweep;

#[derive(Parser)]
#[command(
    name = "k2u",
    about = "Schedulability analysis via k-point effective tests",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one schedulability test against a task-set file.
    Analyze(AnalyzeArgs),
    /// Generate task sets over a utilization grid and record acceptance
    /// ratios per test into a CSV file.
    Sweep(SweepArgs),
    /// Solve and print the named constants of the analysis family.
    SolveFactors,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Task-set JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Test identifier.
    #[arg(long, value_enum)]
    test: TestId,
    /// Task to analyze: a 1-based index or "all".
    #[arg(long, default_value = "all")]
    task: String,
    /// Override the processor count from the input file.
    #[arg(long)]
    processors: Option<u32>,
    /// Period-ratio parameter of the fp tests.
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Enable the experimental response-time bound tests.
    #[arg(long, default_value_t = false)]
    experimental_rt_bounds: bool,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Tasks per generated set.
    #[arg(long)]
    n: usize,
    /// Processor count for the generated sets.
    #[arg(long, default_value_t = 1)]
    processors: u32,
    /// Utilization grid as LO:HI:STEP.
    #[arg(long)]
    util: String,
    /// Task sets per grid point.
    #[arg(long)]
    sets: usize,
    /// Base seed; the full run is a pure function of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated list of test identifiers.
    #[arg(long, value_delimiter = ',')]
    tests: Vec<TestId>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Deadline class of the generated sets.
    #[arg(long, value_enum, default_value_t = DeadlineClassArg::Implicit)]
    deadline_class: DeadlineClassArg,
    /// Period range as LO:HI (log-uniform draw).
    #[arg(long, default_value = "1:100")]
    period_range: String,
    /// Enable the experimental response-time bound tests.
    #[arg(long, default_value_t = false)]
    experimental_rt_bounds: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeadlineClassArg {
    Implicit,
    Constrained,
    Arbitrary,
}

impl From<DeadlineClassArg> for k2u::model::DeadlineClass {
    fn from(value: DeadlineClassArg) -> Self {
        match value {
            DeadlineClassArg::Implicit => k2u::model::DeadlineClass::Implicit,
            DeadlineClassArg::Constrained => k2u::model::DeadlineClass::Constrained,
            DeadlineClassArg::Arbitrary => k2u::model::DeadlineClass::Arbitrary,
        }
    }
}

/// Every registered test.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestId {
    Tda,
    FpHyperbolic,
    FpSum,
    BusyWindow,
    EdfDbf,
    GrmNaive,
    Grm,
    GrmDag,
    GrmSuspend,
    GrmFast,
    GrmTight,
    Bertogna,
    RmUs,
    RtLinear,
    RtHyperbolic,
}

impl TestId {
    fn name(self) -> &'static str {
        match self {
            TestId::Tda => "tda",
            TestId::FpHyperbolic => "fp-hyperbolic",
            TestId::FpSum => "fp-sum",
            TestId::BusyWindow => "busy-window",
            TestId::EdfDbf => "edf-dbf",
            TestId::GrmNaive => "grm-naive",
            TestId::Grm => "grm",
            TestId::GrmDag => "grm-dag",
            TestId::GrmSuspend => "grm-suspend",
            TestId::GrmFast => "grm-fast",
            TestId::GrmTight => "grm-tight",
            TestId::Bertogna => "bertogna",
            TestId::RmUs => "rm-us",
            TestId::RtLinear => "rt-linear",
            TestId::RtHyperbolic => "rt-hyperbolic",
        }
    }

    fn is_experimental(self) -> bool {
        matches!(self, TestId::RtLinear | TestId::RtHyperbolic)
    }

    /// Tests that judge the whole set with a single verdict.
    fn is_whole_set(self) -> bool {
        matches!(self, TestId::EdfDbf | TestId::GrmFast)
    }
}

/// Boundary tolerance override from the environment, if any.
fn tolerance_override() -> Result<Option<f64>, String> {
    match std::env::var("K2U_TOLERANCE") {
        Ok(text) => text
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| format!("K2U_TOLERANCE is not a number: {:?}", text)),
        Err(_) => Ok(None),
    }
}

fn solve_factors() -> ExitCode {
    let speedup = k2u::factors::solve_speedup_factor();
    let dag = k2u::factors::solve_capacity_factor(3.0, 2.0).expect("fixed bracket");
    let sporadic = k2u::factors::solve_capacity_factor(2.0, 1.0).expect("fixed bracket");
    for (label, r) in [
        ("speedup          ", speedup),
        ("capacity-dag     ", dag),
        ("capacity-sporadic", sporadic),
    ] {
        println!(
            "{} factor {:.6}  root {:.6}  residual {:.3e}",
            label, r.factor, r.root, r.residual
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tolerance = match tolerance_override() {
        Ok(t) => t,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Command::Analyze(args) => analyze::run(&args, tolerance),
        Command::Sweep(args) => sweep::run(&args, tolerance),
        Command::SolveFactors => solve_factors(),
    }
}
