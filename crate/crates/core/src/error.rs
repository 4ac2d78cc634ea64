use thiserror::Error;

pub type Result<T> = std::result::Result<T, ProbeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    /// Input outside the physical or mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed form was asked for outside the regime it was derived for.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bound diverges: {0}")]
    Divergent(String),

    /// Derivative of the ideal rectangular overlap does not exist at delta == eps.
    #[error("bound diverges: rectangular overlap has a kink at delta = eps")]
    Kink,

    #[error("numerical non-convergence: {what} (last change {change:e})")]
    NonConvergence { what: &'static str, change: f64 },
}

impl ProbeError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ProbeError::Domain(msg.into())
    }
}
