//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by committee selection, oracles, loaders, and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter was outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A method was pointed at feedback of the wrong kind, e.g. an ordinal
    /// algorithm on a binary matrix or full ranking recovery on weak ranks.
    #[error("source mismatch: {0}")]
    SourceMismatch(String),

    /// Rejection sampling hit its draw cap before accepting a failure.
    /// Signals that the conditioning event may have probability zero or
    /// below the detection scale implied by the cap.
    #[error("rejection sampling exhausted after {draws} draws")]
    Exhausted {
        /// Unconditional draws spent before giving up.
        draws: u64,
    },

    /// An enumeration would exceed the configured committee-count cap.
    #[error("enumeration cap exceeded: {needed} committees > cap {cap}")]
    CapExceeded {
        /// Committees the enumeration would have to visit.
        needed: u128,
        /// Configured cap.
        cap: u128,
    },

    /// A data file failed to parse; row/column are 1-based positions.
    #[error("{path}: row {row}, column {col}: {msg}")]
    Malformed {
        /// File the error was found in.
        path: String,
        /// 1-based row.
        row: usize,
        /// 1-based column.
        col: usize,
        /// What was wrong.
        msg: String,
    },

    /// A data file violated a whole-file invariant (ragged rows, duplicate
    /// labels, empty body).
    #[error("{path}: {msg}")]
    BadData {
        /// File the error was found in.
        path: String,
        /// What was wrong.
        msg: String,
    },

    /// Run or sweep configuration was invalid.
    #[error("config error: {0}")]
    Config(String),

    /// I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 data, 4 cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParam(_) | Error::SourceMismatch(_) => 2,
            Error::Malformed { .. } | Error::BadData { .. } | Error::Io(_) => 3,
            Error::CapExceeded { .. } => 4,
            Error::Exhausted { .. } => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
