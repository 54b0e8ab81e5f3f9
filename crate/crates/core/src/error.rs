use thiserror::Error;

/// Errors raised by the transform, moment and bound evaluators.
///
/// Variants split into two families: caller misconfiguration
/// ([`Error::InvalidParameter`], [`Error::GridMismatch`]) and numerical
/// preconditions that the sampled data failed to meet (everything else).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid too small: n = {n} (need at least {min})")]
    GridTooSmall { n: usize, min: usize },

    #[error("grids do not match")]
    GridMismatch,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("wraparound risk: edge magnitude {edge:.3e} exceeds {limit:.3e} of the peak")]
    WraparoundRisk { edge: f64, limit: f64 },

    #[error("grid does not cover the {what} integrand: edge/peak ratio {ratio:.3e}")]
    GridCoverage { what: &'static str, ratio: f64 },

    #[error("zero-energy input")]
    ZeroEnergy,

    #[error("determinant ad - bc = {det} (must be 1)")]
    Determinant { det: f64 },

    #[error("parameter b = 0 selects the degenerate branch: {0}")]
    DegenerateBranch(&'static str),

    #[error("unnormalized auxiliary function: ||h||^2 = {0}")]
    Unnormalized(f64),

    #[error("weight function supplies derivatives up to order {max}, requested {requested}")]
    DerivativeOrder { requested: usize, max: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that indicate the caller supplied an unusable
    /// configuration, as opposed to a numerical precondition failure.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::GridTooSmall { .. }
                | Error::GridMismatch
                | Error::Determinant { .. }
                | Error::DegenerateBranch(_)
                | Error::Unnormalized(_)
                | Error::DerivativeOrder { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
