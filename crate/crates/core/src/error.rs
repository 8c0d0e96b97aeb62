use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the decision engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("cube sum {mu}^3 + {nu}^3 = {sum} exceeds 1")]
    CubeSum { mu: f64, nu: f64, sum: f64 },
    #[error("unknown linguistic term `{0}`")]
    UnknownTerm(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),
    #[error("degenerate reference: {0}")]
    DegenerateReference(String),
    #[error("ranking item mismatch: {0}")]
    ItemMismatch(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },
    #[error("problem too large: {0}")]
    TooLarge(String),
}

/// Coarse classification used for exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input was rejected: bad document, bad parameter, unknown term.
    Invalid,
    /// The input was well-formed but the computation has no defined result.
    Degenerate,
    /// The input exceeds the configured size limits.
    TooLarge,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegenerateWeights(_) | Error::DegenerateReference(_) => ErrorKind::Degenerate,
            Error::TooLarge(_) => ErrorKind::TooLarge,
            _ => ErrorKind::Invalid,
        }
    }

    /// The document path or parameter name the error refers to, when known.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::Schema { path, .. } | Error::Validation { path, .. } => Some(path),
            Error::Domain { what, .. } => Some(what),
            _ => None,
        }
    }

    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}
