use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// Operands from different fields or rings, malformed input, violated preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A configured resource bound was hit. Never silently truncated.
    #[error("bound exceeded in {site}: {detail}")]
    BoundExceeded { site: String, detail: String },

    /// An identity that must hold failed. Indicates a bug.
    #[error("verification failure: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn bound(site: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::BoundExceeded {
            site: site.into(),
            detail: detail.into(),
        }
    }
}
