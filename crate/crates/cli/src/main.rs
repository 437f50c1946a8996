//! `hwm`: voting-rule analysis, reversal-paradox search, proof checking and
//! CNF encoding from the command line.
//!
//! Exit codes: 0 no violation / check passed, 1 violation found / check
//! failed, 2 undecided (budget exceeded) or unusable input.

mod analyze;
mod check;
mod proofs;
mod report;
mod sat;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hwm_core::prefs::{parse_order, Labels};
use hwm_core::rules::TieBreak;
use hwm_core::scan::{Execution, ScanConfig, DEFAULT_BUDGET};
use hwm_core::Error;

use report::Report;

/// Default solver binary for `encode --solve` when no path is given.
pub const SOLVER_ENV: &str = "HWM_SOLVER";

#[derive(Parser)]
#[command(name = "hwm", version, about = "Half-way monotonicity toolkit for small elections")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Maximum number of profiles (or keys) a search may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Sample the domain with this seed when it exceeds the budget.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 runs sequentially. Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON lines instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Global {
    pub fn execution(&self) -> Execution {
        match self.workers {
            Some(0) => Execution::Sequential,
            workers => Execution::Parallel { workers },
        }
    }

    pub fn scan(&self) -> ScanConfig {
        ScanConfig {
            budget: self.budget,
            seed: self.seed,
            execution: self.execution(),
        }
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new(self.json);
        r.push("budget", self.budget.to_string(), self.budget.into());
        match self.seed {
            Some(s) => r.push("seed", s.to_string(), s.into()),
            None => r.push("seed", "none".into(), serde_json::Value::Null),
        }
        r
    }
}

#[derive(Subcommand)]
enum Command {
    /// Margins, Condorcet winner and every rule's outcome on a profile file.
    Analyze {
        profile: PathBuf,
        /// Tie-break priority, e.g. `c>a>b`; lexicographic by default.
        #[arg(long)]
        tiebreak: Option<String>,
    },
    /// Search for a paradox of the given kind.
    Check(check::CheckArgs),
    /// Machine-check one of the impossibility arguments.
    VerifyProofs(proofs::VerifyArgs),
    /// Write a DIMACS CNF and its variable map.
    Encode(sat::EncodeArgs),
    /// Turn a solver model into a rule table (or named choices for proof trees).
    Decode(sat::DecodeArgs),
    /// Re-check a rule table for Condorcet-consistency and half-way monotonicity.
    VerifyTable { table: PathBuf },
    /// Add a voter and their exact opposite to a profile.
    Pad {
        profile: PathBuf,
        /// Order of the first added voter, e.g. `a>b>c`.
        #[arg(long)]
        order: String,
        /// Number of opposed pairs to add.
        #[arg(long, default_value_t = 1)]
        pairs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
    Undecided,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
            Outcome::Undecided => 2,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(s) => f.write_str(s),
        }
    }
}

pub type CmdResult = Result<(Report, Outcome), Failure>;

pub fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn tiebreak(text: Option<&str>, labels: &Labels) -> Result<TieBreak, Failure> {
    Ok(match text {
        Some(t) => TieBreak::new(parse_order(t, labels)?),
        None => TieBreak::lexicographic(labels.m()),
    })
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    match cli.command {
        Command::Analyze { profile, tiebreak } => analyze::analyze(g, &profile, tiebreak.as_deref()),
        Command::Check(args) => check::check(g, &args),
        Command::VerifyProofs(args) => proofs::verify(g, &args),
        Command::Encode(args) => sat::encode(g, &args),
        Command::Decode(args) => sat::decode(g, &args),
        Command::VerifyTable { table } => sat::verify_table(g, &table),
        Command::Pad { profile, order, pairs } => analyze::pad(g, &profile, &order, pairs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, outcome)) => {
            print!("{}", report.render());
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Outcome::Undecided.code())
        }
    }
}
