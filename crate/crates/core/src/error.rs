use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Gamma (or k-Gamma) argument landed on a pole.
    #[error("pole: Gamma argument {arg} is a non-positive integer")]
    Pole { arg: f64 },

    /// The result exceeds the representable range of an `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An input violates a stated precondition.
    #[error("domain: {0}")]
    Domain(String),

    /// The k-Wright series does not converge at the requested argument.
    #[error("divergent: {0}")]
    Divergence(String),

    /// The series stopping rule did not fire within the term budget.
    #[error("truncation: stopping rule not met after {terms} terms (last term {last_term:e}, partial sum {partial_sum:e})")]
    Truncation {
        terms: usize,
        last_term: f64,
        partial_sum: f64,
    },

    /// Quadrature or extrapolation exhausted its budget before meeting tolerance.
    #[error("not converged: {what} (estimate {estimate:e}, error {error:e})")]
    NonConverged {
        what: String,
        estimate: f64,
        error: f64,
    },

    /// A right-sided integrand does not decay fast enough to be integrable.
    #[error("integrand does not decay: {0}")]
    Decay(String),

    /// The integrand returned NaN or an infinity at an interior node.
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_)
                | Error::Truncation { .. }
                | Error::NonConverged { .. }
                | Error::Decay(_)
                | Error::NonFinite { .. }
        )
    }
}
