use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("sample columns differ in length ({xs} vs {ys})")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("non-finite observation at index {0}")]
    NonFinite(usize),

    #[error("estimated denominator mean is zero")]
    DegenerateDenominator,

    #[error("estimated covariance is degenerate along slope {slope}")]
    SingularDirection { slope: f64 },

    #[error("estimated covariance matrix is singular or ill-conditioned")]
    SingularCovariance,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bootstrap redraw budget of {budget} draws exhausted on degenerate resamples")]
    DegenerateResample { budget: usize },

    #[error("confidence rule failed at slope {slope}: {source}")]
    Rule { slope: f64, source: Box<Error> },
}
