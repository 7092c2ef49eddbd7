use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated a precondition (length mismatch, incomplete table, bad range).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("invalid decay model: {0}")]
    InvalidModel(String),

    /// A resource guard (graph level, cycle count, sample size) was exceeded.
    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("graph has no directed cycle")]
    NoCycle,

    /// Fewer than two distinct cycles, so no gap is defined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::InvalidModel(_) | Error::Json(_) => 2,
            Error::NoCycle | Error::Degenerate(_) => 3,
            Error::Resource(_) => 4,
            Error::Io(_) | Error::Csv(_) => 5,
        }
    }
}
