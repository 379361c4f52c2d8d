use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation at a pole.
    #[error("pole: {0}")]
    Pole(String),
    /// Components do not have the dyadic-ratio shape required.
    #[error("structure error: {0}")]
    Structure(String),
    /// The greedy oracle could not place a point.
    #[error("construction error: {0}")]
    Construction(String),
    /// A requested tolerance could not be met within the term budget.
    #[error("tolerance not reached: {0}")]
    Tolerance(String),
    /// The target is constant on the whole interval.
    #[error("degenerate target: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
