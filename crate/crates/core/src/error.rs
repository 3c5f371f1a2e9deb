use thiserror::Error;

/// Errors produced by parameter validation and the numerical kernels.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spring constant sigma must be positive and finite (got {0})")]
    NonPositiveSpringConstant(f64),
    #[error("mass must be positive and finite (got {0})")]
    NonPositiveMass(f64),
    #[error("natural half-length l0 must be positive and finite (got {0})")]
    NonPositiveNaturalLength(f64),
    #[error("wire is not pre-stretched: need l > l0 (got l = {l}, l0 = {l0})")]
    NotPreStretched { l0: f64, l: f64 },
    #[error("amplitude y0 must satisfy y0 > 0 and be finite (got {0})")]
    NonPositiveAmplitude(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "tolerance not met after {evaluations} evaluations: best estimate {value} with error bound {error_estimate}"
    )]
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("invalid bracket: f({lo}) and f({hi}) have the same sign")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("step limit of {0} steps exceeded")]
    StepLimitExceeded(usize),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("no zero crossing found within {0} steps")]
    EventNotFound(usize),
}

impl Error {
    /// True for failures caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotMet { .. }
                | Error::StepLimitExceeded(_)
                | Error::StepUnderflow(_)
                | Error::EventNotFound(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
