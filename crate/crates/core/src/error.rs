use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument {value} is outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("integration did not converge: estimate {value:e}, error {achieved:e} > requested {requested:e}")]
    NonConvergence {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("sweep point {point}: {source}")]
    Point {
        point: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
