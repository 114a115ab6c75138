use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed or invariant-violating input; `line` is 1-based, 0 when unknown.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A budget cap was hit, or a construction escapes what the materialization can decide.
    #[error("out of budget: {0}")]
    OutOfBudget(String),

    /// Two independent decision routes disagreed. Always an engine bug.
    #[error("inconsistent decision routes: {0}")]
    Inconsistent(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::OutOfBudget(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
