//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate rectangle: side lengths must be positive (got {0} x {1})")]
    DegenerateBox(f64, f64),

    #[error("rectangle is not compatible with exponents {beta:?}: side scales {s1} vs {s2}")]
    NotBetaRectangle { beta: [f64; 2], s1: f64, s2: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("curve is not in the single-flip class required by this construction")]
    NotSingleFlip,

    #[error("divisor magnitude {denom} below floor {floor} at ({x}, {y}); separation parameter too small")]
    DivisionFloor { x: f64, y: f64, denom: f64, floor: f64 },

    #[error("quadrature did not converge: value {value}, error estimate {est_error} after {evaluations} evaluations ({context})")]
    QuadratureNonConvergence {
        value: f64,
        est_error: f64,
        evaluations: u64,
        context: String,
    },

    #[error("principal value did not stabilise over the exclusion sequence ({context})")]
    PrincipalValueNonConvergence { context: String },

    #[error("integration set contains the kernel singularity t = 0")]
    IntervalContainsOrigin,

    #[error("parameter preimage of W from ({x}, {y}) is {kind}")]
    BadWPreimage { x: f64, y: f64, kind: &'static str },

    #[error("reflection symmetry self-test failed at ({x}, {y})")]
    ReflectionAsymmetry { x: f64, y: f64 },

    #[error("point ({x}, {y}) violates precondition: {what}")]
    OutOfDomain { x: f64, y: f64, what: &'static str },

    #[error("root finding failed: {0}")]
    RootFind(String),

    #[error("separation parameter A = {a} too small: {why}")]
    SeparationTooSmall { a: f64, why: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
