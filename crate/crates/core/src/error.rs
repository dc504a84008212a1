use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only d = 2 and d = 3 are supported")]
    UnsupportedDimension(u32),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("point model does not match dimension d = {0}")]
    DimensionMismatch(u32),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    /// A regime precondition of a bound does not hold. `value` is the quantity
    /// that was tested and `threshold` the limit it must stay below.
    #[error("{condition} violated: {value} (threshold {threshold})")]
    InvalidRegime {
        condition: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("ODE integration failed at r = {r}: {reason}")]
    IntegrationFailure { r: f64, reason: &'static str },

    #[error("scattering length matching failed: {0}")]
    MatchingFailure(String),

    #[error("singular linear system at row {0}")]
    SingularSystem(usize),

    #[error("gap policy `{policy}` is not compatible with {model}")]
    IncompatibleGapPolicy {
        policy: &'static str,
        model: &'static str,
    },

    #[error("invalid manifold model: {0}")]
    InvalidModel(String),
}

impl Error {
    /// True for errors that describe a violated regime rather than bad input
    /// or a numerical breakdown.
    pub fn is_regime(&self) -> bool {
        matches!(self, Error::InvalidRegime { .. })
    }

    /// True for errors raised by the numerical machinery itself.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::IntegrationFailure { .. } | Error::MatchingFailure(_) | Error::SingularSystem(_)
        )
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
