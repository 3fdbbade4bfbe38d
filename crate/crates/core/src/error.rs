use thiserror::Error;

use crate::summation::SeriesOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("second Kummer parameter b = {b} is a non-positive integer")]
    PoleAtNonpositiveB { b: String },

    #[error("series did not converge within {} terms", .partial.n_terms)]
    NoConvergence { partial: Box<SeriesOutcome> },

    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),

    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("pole hit: {0}")]
    PoleHit(String),

    #[error("geometry violation: {0}")]
    GeometryViolation(String),

    #[error("kappa = {kappa} lies within {guard:e} of a positive integer")]
    NearPole { kappa: String, guard: f64 },

    #[error("finite-difference step {0:e} underflows the working precision")]
    DerivativeStepUnderflow(f64),

    #[error("confluent point u = v; enable the derivative limit to evaluate it")]
    ConfluentPoint,

    #[error("parameter pole: {0}")]
    ParameterPole(String),

    #[error("precision exhausted after {digits} digits (condition number {condition:e})")]
    PrecisionExhausted { digits: u32, condition: f64 },

    #[error("coincident points: R = 0")]
    CoincidentPoints,

    #[error("coincident radii: r = r0 = {0}")]
    CoincidentRadii(f64),

    #[error("result out of range: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn no_convergence(partial: SeriesOutcome) -> Self {
        Error::NoConvergence {
            partial: Box::new(partial),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
