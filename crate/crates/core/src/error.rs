//! Error type shared by the modeling and optimization modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A domain value failed its construction-time invariant.
    #[error("invalid value for `{field}`: {message}")]
    InvalidParam { field: String, message: String },

    /// Development hours after automation are zero, so the test/dev quality
    /// ratio has no denominator.
    #[error("development hours after automation are zero; quality ratio is undefined")]
    DegenerateDenominator,

    /// The optimizer configuration violates one of its invariants.
    #[error("invalid optimizer config: {0}")]
    ConfigInvalid(String),

    /// Hypervolume normalization needs a strictly positive baseline cost.
    #[error("baseline cost must be positive, got {0}")]
    NonpositiveBase(f64),

    /// Statistics over an empty value list are undefined.
    #[error("cannot summarize an empty list of values")]
    EmptyInput,

    /// An optimization produced no feasible solution to report.
    #[error("no feasible solution found")]
    NoFeasibleSolution,
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            field: field.into(),
            message: message.into(),
        }
    }
}
