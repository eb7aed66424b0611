use thiserror::Error;

/// Errors produced by sample construction, estimators, quadrature and the
/// identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least {needed} observations, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("observation {index} is negative ({value})")]
    NegativeValue { index: usize, value: f64 },

    #[error("observation {index} is not finite")]
    NonFinite { index: usize },

    #[error("no observations in the tail selected by t = {t}")]
    EmptyTail { t: f64 },

    #[error("need at least two observations in the tail selected by t = {t}, got {got}")]
    FewerThanTwo { t: f64, got: usize },

    #[error("{0}")]
    BadParameter(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("unsupported: {0}")]
    UnsupportedSpec(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub(crate) fn bad(msg: impl Into<String>) -> Self {
        Error::BadParameter(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedSpec(msg.into())
    }

    /// True for errors caused by the caller's data or parameters rather than
    /// by numerical failure.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::NoConvergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
