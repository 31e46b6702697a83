use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("{0}")]
    Usage(&'static str),

    #[error("quadrature did not converge: error estimate {estimate:e} after {panels} panels")]
    Quadrature { estimate: f64, panels: usize },

    #[error("ODE step size underflow; last good r = {r}")]
    StepUnderflow { r: f64 },

    #[error("zero observation carries no information")]
    ZeroObservation,

    #[error("value {value} lies below the separator V(r) = {separator}")]
    BelowSeparator { value: f64, separator: f64 },

    #[error("value {value} lies on or above the separator V(r) = {separator}")]
    AboveSeparator { value: f64, separator: f64 },

    #[error("no eigenvalue reproduces value {value}: {reason}")]
    NoConvergence { value: f64, reason: &'static str },

    #[error("radius {r} exceeds the admissible radius {max_radius}; a second observation at r0 = {max_radius} is required")]
    RadiusTooLarge { r: f64, max_radius: f64 },

    #[error("value {value} is outside the attainable range [{lo}, {hi}]")]
    ValueOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("observation at r = {r} is inconsistent with the recovered eigenvalue (residual {residual:e} > {tolerance:e})")]
    InconsistentObservation { r: f64, residual: f64, tolerance: f64 },

    #[error("sampler failed: {0}")]
    Sampler(String),
}

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
