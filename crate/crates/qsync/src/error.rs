//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by parameter validation, the integrators, grid
/// evaluation and serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter failed validation. `name` identifies the
    /// offending parameter or flag so callers can surface it verbatim.
    #[error("invalid `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },

    /// A requested evaluation would exceed the global step budget.
    #[error("step budget exceeded: {requested} points requested, limit is {limit}")]
    BudgetExceeded { requested: u128, limit: u64 },

    /// The integrator produced a non-finite amplitude.
    #[error("non-finite amplitude at t = {t}")]
    NonFinite { t: f64 },

    /// A density matrix violated the positivity bound beyond tolerance.
    #[error("density matrix positivity violated by {excess:.3e}")]
    Positivity { excess: f64 },

    /// A trajectory was too short for revival detection.
    #[error("trajectory too sparse: {points} points, need at least {min}")]
    SparseTrajectory { points: usize, min: usize },

    /// A grid had the wrong number of axes for the requested operation.
    #[error("grid has {got} axes, expected {expected}")]
    Dimensionality { expected: usize, got: usize },

    /// A grid definition was inconsistent (duplicate, missing or
    /// extraneous axes, malformed axis spec, and so on).
    #[error("invalid grid: {0}")]
    Grid(String),

    /// An unrecognized figure preset identifier.
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    /// Refusal to serialize NaN or infinite values.
    #[error("refusing to serialize non-finite value at data row {row}")]
    NonFiniteOutput { row: usize },

    /// An I/O failure while reading configuration or writing output.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
