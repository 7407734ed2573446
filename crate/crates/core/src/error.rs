use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A problem exceeds a desk-scale guard (qubits, sites, cycles).
    #[error("size error: {0}")]
    Size(String),

    #[error("index {index} out of range for {len} {what}")]
    Index {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Invalid experiment configuration; `field` names the offending key.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: msg.into(),
        }
    }

    /// Process exit code used by the CLI: 2 for usage/config problems,
    /// 3 for size-guard failures, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Size(_) => 3,
            Error::Config { .. } | Error::Argument(_) | Error::Parse { .. } | Error::Domain { .. } => 2,
            Error::Index { .. } => 2,
            Error::Io(_) => 1,
        }
    }
}
