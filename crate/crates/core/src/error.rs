use thiserror::Error;

use crate::curve::MethodId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The dimensionless parameter lies outside the domain of a formula.
    #[error("epsilon = {epsilon} is outside the valid range {valid}")]
    EpsilonOutOfRange { epsilon: f64, valid: &'static str },

    /// Curve parameter below the lower bound of its branch.
    #[error("parameter {value} is below the branch lower bound {bound}")]
    ParameterBelowBound { value: f64, bound: f64 },

    /// The particle has already dissolved completely at the requested time.
    #[error("t = {t} is past the time to complete dissolution t0 = {t0}")]
    PastDissolution { t: f64, t0: f64 },

    #[error("an end time is required when the particle never dissolves (epsilon = {epsilon})")]
    MissingEndTime { epsilon: f64 },

    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(usize),

    #[error("curve epsilon {curve} does not match scenario epsilon {scenario}")]
    EpsilonMismatch { curve: f64, scenario: f64 },

    #[error("method `{method}` has no time to complete dissolution at epsilon = {epsilon}")]
    NoDissolutionTime { method: MethodId, epsilon: f64 },

    #[error("position r = {r} lies inside the particle of radius {radius}")]
    InsideParticle { r: f64, radius: f64 },

    #[error("step size underflow at t = {t} (R = {radius})")]
    StepUnderflow { t: f64, radius: f64 },

    #[error("maximum number of steps ({steps}) exceeded at t = {t} (R = {radius})")]
    MaxSteps { steps: usize, t: f64, radius: f64 },

    #[error("surface flux changed by {relative_change:.3e} between refinement levels (limit {limit})")]
    MeshNotConverged { relative_change: f64, limit: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
