use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants are grouped so that callers (the CLI in particular) can map them
/// onto a small set of failure categories with [`Error::kind`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("input is empty: {0}")]
    Empty(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("unknown or missing key: {0}")]
    Key(String),

    #[error("arity error: {0}")]
    Arity(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse failure category, used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Alignment,
    Arity,
    Degenerate,
    Invalid,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } | Error::Empty(_) => ErrorKind::Parse,
            Error::Alignment(_) | Error::Coverage(_) | Error::Key(_) => ErrorKind::Alignment,
            Error::Arity(_) => ErrorKind::Arity,
            Error::UndefinedMetric(_) | Error::DegenerateWeights(_) => ErrorKind::Degenerate,
            Error::Invalid(_) => ErrorKind::Invalid,
            Error::Io(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn parse(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::parse(line, format!("{other:?}")),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
