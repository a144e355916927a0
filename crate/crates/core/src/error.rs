//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A state vector (or ψ grid) has squared norm zero.
    #[error("state has zero squared norm")]
    ZeroNorm,

    /// A domain type rejected its input (message names the offending field).
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    /// An operation was applied to a model it does not support.
    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    /// The bisection model requires a power-of-two number of pointer states.
    #[error("unsupported N = {n}: bisection requires a power of two")]
    UnsupportedN { n: usize },

    /// A non-finite value appeared during integration.
    #[error("numerical blowup at step {step}")]
    NumericalBlowup { step: u64 },

    /// Blowup inside an ensemble, tagged with the trajectory's stream index.
    #[error("numerical blowup in trajectory {stream} at step {step}")]
    EnsembleBlowup { stream: u64, step: u64 },

    /// An ensemble statistic was requested on zero outcomes.
    #[error("empty ensemble")]
    EmptyEnsemble,
}

impl Error {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            why: why.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
