//! Error type shared by all modules.

use thiserror::Error;

/// Failures reported by the simulators, solvers and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A configuration field is out of range or inconsistent.
    #[error("configuration error at `{field}`: {message}")]
    Config { field: String, message: String },

    /// A gate cannot be represented in the requested engine.
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    /// Index or shape mismatch.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A dense state would exceed the configured qubit cap.
    #[error("capacity error: {qubits} qubits requested, cap is {cap}")]
    Capacity { qubits: usize, cap: usize },

    /// Invalid argument to an analysis routine.
    #[error("argument error: {0}")]
    Argument(String),

    /// Quasimomentum solver could not recover the full mode set.
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// Amplitude consistency check failed, indicating a branch or sign slip.
    #[error("convention error: {0}")]
    Convention(String),

    /// Transport series is missing snapshots required for a current.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// Power-law fit requested on nonpositive data.
    #[error("fit domain error: {0}")]
    FitDomain(String),

    /// Gaussian preparation plan did not reproduce the target state.
    #[error("compilation error: {0}")]
    Compilation(String),

    /// The requested engine cannot represent this experiment.
    #[error("capability error: {0}")]
    Capability(String),

    /// An iterative solve did not converge.
    #[error("not converged: {0}")]
    NotConverged(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
