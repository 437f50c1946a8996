//! Voting rules on small profiles, monotonicity checkers, a checker for
//! reversal-based impossibility proofs, and CNF encodings of the same
//! questions for external SAT solvers.

pub mod error;
pub mod monotonicity;
pub mod prefs;
pub mod proofcheck;
pub mod rules;
pub mod satgen;
pub mod scan;
pub mod tally;

pub use error::{Error, Result};
pub use prefs::{Alternative, Labels, LinearOrder, Profile, ProfileIndex};
pub use rules::{AltSet, SetRule, TieBreak, VotingRule};
pub use scan::{Coverage, Execution, ScanConfig, ScanOutcome};
pub use tally::MarginMatrix;
