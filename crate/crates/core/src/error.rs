//! Error taxonomy shared across the analysis pipeline.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition is violated (negative rate, eta out of range...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration input cannot be used (bad key, inconsistent values...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The drift matrix has a non-decaying eigenvalue; stationary formulas
    /// do not apply.
    #[error("unstable model: max Re(eigenvalue) = {margin:.3e} >= 0")]
    Unstable { margin: f64 },

    /// A linear solve failed or is numerically meaningless.
    #[error("numerical error: {message} (condition estimate {condition:.3e})")]
    Numerical { message: String, condition: f64 },

    /// The perturbation does not couple to the monitored port.
    #[error("signal null: {0}")]
    SignalNull(String),

    /// An optimum requested at a parameter point where it is undefined.
    #[error("undefined optimum: {0}")]
    UndefinedOptimum(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
