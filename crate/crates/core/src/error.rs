use thiserror::Error;

/// Error classes map one-to-one onto CLI exit codes: validation errors
/// exit 1, capacity errors exit 2, counterexamples and internal failures
/// exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad address, wrong family, weight
    /// sum out of range, unparseable file).
    #[error("validation: {0}")]
    Validation(String),

    /// The request exceeds a configured resource cap.
    #[error("capacity: {0}")]
    Capacity(String),

    /// A verified bound failed on a concrete pair. This indicates a bug in
    /// the construction, not a user error.
    #[error("counterexample: {0}")]
    Counterexample(String),

    /// Broken internal invariant (solver returned an inconsistent state,
    /// generated graph disconnected, ...).
    #[error("internal: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Io(_) => 1,
            Error::Capacity(_) => 2,
            Error::Counterexample(_) | Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
