use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// The variants separate "you called this with arguments outside the
/// contract" ([`Error::Domain`]) from "the computation itself gave up"
/// (the remaining variants), because callers usually want to treat the
/// two differently: the first is a bug at the call site, the others can
/// legitimately happen on extreme data.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root-finding bracket did not enclose a sign change.
    #[error("bracketing error: {0}")]
    Bracket(String),

    /// An iterative scheme ran out of its iteration budget or hit a
    /// non-finite intermediate value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The observed-information matrix was singular or not positive
    /// definite, so no covariance (and no interval) can be derived.
    #[error("curvature error: {0}")]
    Curvature(String),

    /// A resampling distribution was too degenerate to work with, for
    /// example every bootstrap replicate on one side of the estimate.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// An estimator failed when applied to a subsample or resample.
    /// `index` identifies the delete-one subsample or the bootstrap
    /// replicate that triggered the failure.
    #[error("estimator failed on subsample {index}: {source}")]
    Estimator {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
