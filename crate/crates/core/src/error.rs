use crate::types::Chart;

/// Errors raised while building systems, evaluating observables or integrating flows.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("chart mismatch: observable lives in {expected} but point is in {found}")]
    ChartMismatch { expected: Chart, found: Chart },
    #[error("point outside domain: {0}")]
    DomainViolation(String),
    #[error("derivative singular: {0}")]
    DerivativeSingular(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("rejection sampling exceeded {attempts} attempts ({accepted} of {requested} points accepted)")]
    SamplingFailed {
        attempts: usize,
        accepted: usize,
        requested: usize,
    },
    #[error("singular transform {from} -> {to}: {reason}")]
    SingularTransform {
        from: Chart,
        to: Chart,
        reason: String,
    },
    #[error("angular singularity: sin(mφ) or cos(mφ) vanishes at φ = {phi}")]
    AngularSingularity { phi: f64 },
    #[error("J2 = {0} is negative; √J2 undefined")]
    NegativeJ2(f64),
    #[error("zero modulus of {0} at evaluation point")]
    ZeroModulus(&'static str),
    #[error("trajectory left the domain at t = {time}")]
    DomainExit { time: f64 },
    #[error("Newton iteration failed to converge at t = {time} (residual {residual:e})")]
    NewtonDivergence { time: f64, residual: f64 },
    #[error("system `{0}` has no Euclidean limit")]
    NoEuclideanLimit(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainViolation(msg.into())
}
