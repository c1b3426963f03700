use thiserror::Error;

use crate::rescaling::CoefficientClass;

/// Failure modes shared by every layer of the crate.
///
/// The variants line up with the CLI exit codes: input errors are
/// validation failures, numeric and pattern errors are numerical failures,
/// diagnostics flag sequences whose limit claims must be withheld.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("infinite distance: {0}")]
    InfiniteDistance(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("vanishing pattern violated in class {class}: |coefficient| = {magnitude:.3e} exceeds {tolerance:.1e}")]
    Pattern {
        class: CoefficientClass,
        magnitude: f64,
        tolerance: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
