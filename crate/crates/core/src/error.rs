use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown alternative label `{0}`")]
    UnknownLabel(String),
    #[error("alternative `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("alternative `{0}` is missing from the order")]
    MissingAlternative(String),
    #[error("m={0} is too large (at most {1} alternatives supported)")]
    MTooLarge(usize, usize),
    #[error("m={0} is too small (need at least {1})")]
    MTooSmall(usize, usize),
    #[error("index {0} out of range for n={1}, m={2}")]
    IndexOutOfRange(u128, usize, usize),
    #[error("voter {0} out of range (n={1})")]
    VoterOutOfRange(usize, usize),
    #[error("order is over {found} alternatives, expected {expected}")]
    AlternativeCountMismatch { expected: usize, found: usize },
    #[error("a profile needs at least one voter")]
    EmptyProfile,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("exact Kemeny needs m <= 7, got m={0}")]
    MTooLargeForExactKemeny(usize),
    #[error("search budget of {budget} exceeded ({detail})")]
    BudgetExceeded { budget: u64, detail: String },
    #[error("profile (n={n}, m={m}) is outside the table domain (n={table_n}, m={table_m})")]
    DomainMismatch {
        n: usize,
        m: usize,
        table_n: usize,
        table_m: usize,
    },
    #[error("no table entry for key {0}")]
    MissingEntry(String),
    #[error("rule family has no member for electorate size {0}")]
    MissingSize(usize),
    #[error("set-valued rule returned an empty set")]
    EmptyOutcomeSet,
    #[error("not a violation: {0}")]
    NotAViolation(String),

    #[error("edge {edge}: {message}")]
    EdgeMismatch { edge: String, message: String },
    #[error("edge {edge}: voter {voter} ranks non-carried {other} below carried {carried}")]
    TransportUnsound {
        edge: String,
        voter: usize,
        carried: String,
        other: String,
    },
    #[error("proof check failed at {path}: {message}")]
    ProofCheck { path: String, message: String },

    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("variable {0} out of range (formula has {1} variables)")]
    VariableOutOfRange(i64, usize),
    #[error("assignment is not a function at key {key}: {true_count} alternatives set true")]
    NotAFunction { key: String, true_count: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
