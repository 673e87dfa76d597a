use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants are grouped by how a caller is expected to react: parameter and
/// config problems are user mistakes, domain/degeneracy errors mean the
/// requested quantity is undefined, contract errors mean an input violated a
/// structural precondition (shape, symmetry, finiteness).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("model validity error: probability {prob} at pair ({i}, {j}) is outside [0, 1]")]
    ModelValidity { i: usize, j: usize, prob: f64 },

    #[error("contract error: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate eigengap: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error at line {line}, field `{field}`: {msg}")]
    Config { line: usize, field: String, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line tool.
    ///
    /// 2 for usage/parameter problems, 3 for domain or degeneracy refusals,
    /// 4 for internal numerical-contract violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_)
            | Error::ModelValidity { .. }
            | Error::Config { .. }
            | Error::Format(_)
            | Error::Fit(_)
            | Error::Io(_)
            | Error::Csv(_) => 2,
            Error::Domain(_) | Error::Degenerate(_) => 3,
            Error::Contract(_) | Error::Numerical(_) => 4,
        }
    }
}
