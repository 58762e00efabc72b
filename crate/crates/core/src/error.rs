use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is not representable as a finite f64.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Complex-argument K_mu was requested for an order without an elementary closed form.
    #[error("unsupported Bessel order: {0}")]
    UnsupportedOrder(String),

    /// The contour strategy only exists for odd dimensions.
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    /// The order kappa falls on a parity-degenerate value for the requested constant.
    #[error("parity error: {0}")]
    Parity(String),

    /// A tensor-grid oracle does not resolve the oscillation of its integrand.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Quadrature or sequence acceleration exhausted its budget before reaching tolerance.
    #[error("no convergence: {reason} (best value {best:e}, estimated error {err_estimate:e})")]
    NoConvergence {
        reason: String,
        best: f64,
        err_estimate: f64,
    },

    /// No radius within the budget certifies the requested bilateral bracketing.
    #[error(
        "no threshold radius certifies epsilon = {epsilon} within radius budget {budget}; best achieved epsilon = {best_epsilon:e}"
    )]
    ThresholdNotFound {
        epsilon: f64,
        budget: f64,
        best_epsilon: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures that come from the numerics rather than from the arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
