use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input data. `row` is 1-based and counts the header line.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("labels contain a single class; both 0 and 1 are required")]
    SingleClass,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("transform `{transform}` cannot consume {found} column `{column}`")]
    TransformMismatch {
        transform: String,
        column: String,
        found: String,
    },

    #[error("tree {tree} has {leaves} leaves; compiled evaluation supports at most 64")]
    TooManyLeaves { tree: usize, leaves: usize },

    #[error("model document: {0}")]
    Model(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Schema(_)
            | Error::EmptyDataset
            | Error::SingleClass
            | Error::TransformMismatch { .. }
            | Error::Model(_)
            | Error::Json(_) => 2,
            Error::TooManyLeaves { .. } | Error::Internal(_) => 3,
        }
    }
}
