//! Error taxonomy shared across the crate. The CLI maps these to exit
//! codes, so the split between usage, data and numeric failures matters.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tensor extents don't line up for the requested operation.
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    /// Caller violated an operation precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input values outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed payload data (bad coordinates, bad polarity byte, ...).
    #[error("data error: {0}")]
    Data(String),

    /// Invalid configuration; names the offending field.
    #[error("invalid configuration: field `{field}`: {detail}")]
    Config { field: &'static str, detail: String },

    /// On-disk dataset or checkpoint does not match its manifest.
    #[error("integrity error in {file}: {detail}")]
    Integrity { file: String, detail: String },

    /// Non-finite values where the pipeline requires finite ones.
    #[error("numeric health failure: {0}")]
    NumericHealth(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn dimension(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub fn config(field: &'static str, detail: impl Into<String>) -> Self {
        Error::Config {
            field,
            detail: detail.into(),
        }
    }

    pub fn integrity(file: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Integrity {
            file: file.into(),
            detail: detail.into(),
        }
    }
}
