//! Crate-wide error type.

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by parsing, validation, and the numeric pipeline.
///
/// Scalar payloads are stored as `f64` regardless of the working precision;
/// they are diagnostic only.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Expression text failed to parse.
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },

    /// Expression references a name that is not `x`, a constant, or a known function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    /// Expression evaluation left the real domain (log/sqrt of a negative,
    /// division by zero, overflow to non-finite).
    #[error("domain error evaluating `{node}` at x = {x}: {detail}")]
    EvalDomain {
        node: String,
        x: f64,
        detail: String,
    },

    /// Shooting solution exceeded the overflow guard.
    #[error("solution diverged during integration at lambda = {lambda} (component magnitude exceeded 1e300)")]
    Diverged { lambda: f64 },

    /// Dense-output evaluation outside the stored span.
    #[error("x = {x} lies outside the stored span [{lo}, {hi}]")]
    OutOfSpan { x: f64, lo: f64, hi: f64 },

    /// Two paths passed to a binary operation disagree on side or lambda.
    #[error("path mismatch: {what}")]
    PathMismatch { what: String },

    /// A transmission-matrix block the jump map must invert is singular.
    #[error("transmission matrix {which} block singular ({minor} = 0)")]
    SingularBlock {
        which: &'static str,
        minor: &'static str,
    },

    /// The two characteristic-function representatives disagree beyond the
    /// internal consistency bound; the integrator resolution is too coarse.
    #[error("characteristic-function inconsistency at lambda = {lambda}: d34*omega- = {left}, d12*omega+ = {right}")]
    OmegaInconsistency { lambda: f64, left: f64, right: f64 },

    /// Resolvent/Green evaluation was requested at (or too near) an eigenvalue.
    #[error("lambda = {lambda} is an eigenvalue or too close to one (omega = {omega:e}{})",
            nearest.map(|n| format!(", nearest eigenvalue {n}")).unwrap_or_default())]
    AtEigenvalue {
        lambda: f64,
        omega: f64,
        nearest: Option<f64>,
    },

    /// The shooting eigenfunction is numerically zero.
    #[error("degenerate eigenfunction at lambda = {lambda}")]
    DegenerateEigenfunction { lambda: f64 },

    /// An H-vector carries a boundary component the configuration disables,
    /// or vice versa.
    #[error("H-vector component mismatch: {what}")]
    ComponentMismatch { what: String },

    /// Simpson quadrature needs an even number of panels.
    #[error("quadrature requires an even step count, got {n}")]
    OddSteps { n: usize },

    /// Hard validation failures; the config is rejected.
    #[error("invalid configuration: {}", failures.join("; "))]
    InvalidConfig { failures: Vec<String> },
}
