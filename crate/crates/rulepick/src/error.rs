use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alternative {0} is not ranked")]
    UnrankedAlternative(usize),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("alternative {id} out of range for {m} alternatives")]
    AlternativeOutOfRange { id: usize, m: usize },
    #[error("alternative {0} appears twice")]
    DuplicateAlternative(usize),
    #[error("dissimilarity is undefined for two empty sets")]
    UndefinedForEmptySets,
    #[error("invalid scoring vector: {0}")]
    InvalidScoringVector(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("unknown aggregator `{0}`")]
    UnknownAggregator(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("IRV requires full rankings")]
    IrvRequiresFullRankings,
    #[error("operation requires full rankings")]
    RequiresFullProfile,
    #[error("{aggregator}: {reason}")]
    Aggregator {
        aggregator: &'static str,
        reason: String,
    },
    #[error("exact enumeration over {n} voters exceeds the limit of {limit}")]
    TooManyVoters { n: usize, limit: usize },
    #[error("exact enumeration needs {states} states, above the limit of {limit}")]
    TooManyStates { states: u128, limit: u128 },
    #[error("enumeration limit exceeded: {m} alternatives, limit {limit}")]
    EnumerationLimit { m: usize, limit: usize },
    #[error("leximax needs fewer than 1000 appearances per position, found {0}")]
    LeximaxBound(u64),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: tie in a strict-only context")]
    TieInStrictContext { line: usize },
    #[error("json: {0}")]
    Json(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Config,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnknownRule(_)
            | Error::UnknownAggregator(_)
            | Error::InvalidParameter(_)
            | Error::InvalidScoringVector(_) => ErrorKind::Config,
            Error::TooManyVoters { .. }
            | Error::TooManyStates { .. }
            | Error::EnumerationLimit { .. } => ErrorKind::Resource,
            _ => ErrorKind::Input,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
