use thiserror::Error;

/// Errors raised across the solver stack.
///
/// Numeric payloads are stored as `f64` so that the error type stays
/// independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{law} coefficient is not positive ({value}) at u = {u}")]
    NonPositiveCoefficient { law: &'static str, u: f64, value: f64 },

    #[error("solution diverged at step {step}, node {node}, t = {time}")]
    Divergence { step: usize, node: usize, time: f64 },

    #[error("singular tridiagonal system: zero pivot at row {row}")]
    SingularSystem { row: usize },

    #[error("singular boundary flux for Bi = {biot}, a = {advection}, distance = {distance}, nu = {diffusion}")]
    SingularBoundary { biot: f64, advection: f64, distance: f64, diffusion: f64 },

    #[error("time step {dt} exceeds the CFL bound {bound}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("time step underflow ({dt}) at t = {time}")]
    StepUnderflow { time: f64, dt: f64 },

    #[error("steady state not reached after {steps} steps; residual tail {tail:?}")]
    NotConverged { steps: usize, tail: Vec<f64> },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("reference solution unreliable: refinement changed the field by {change}, limit {limit}")]
    OracleUnreliable { change: f64, limit: f64 },

    #[error("perturbed run {label} failed: {reason}")]
    Perturbation { label: String, reason: String },

    #[error("fit infeasible: {0}")]
    FitInfeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
