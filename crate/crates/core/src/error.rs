use std::io;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the range an operation accepts.
    #[error("{what} out of range: {value}")]
    Domain { what: &'static str, value: f64 },

    /// A value violated a structural invariant (norm, orthogonality, arity).
    #[error("contract violated: {0}")]
    Contract(String),

    /// A log record failed validation.
    #[error("invalid record{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        message: String,
    },

    /// A JSONL line could not be decoded.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("query not found: {0}")]
    NotFound(String),

    /// Synthetic-log targets that cannot be satisfied simultaneously.
    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    pub(crate) fn invalid(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Validation {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
