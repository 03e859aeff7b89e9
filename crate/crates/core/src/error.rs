//! Crate-wide error type.

/// Errors surfaced by catalog validation, quadrature, and the test pipelines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("negative argument: {0}")]
    NegativeArgument(String),

    #[error("argument outside supported domain: {0}")]
    OutOfRange(String),

    #[error("composition requires inner value 0 at the origin: {0}")]
    NonzeroAtOrigin(String),

    /// The closed metric ball at this radius is unbounded (the radius reaches
    /// or exceeds the infimum of the exponent at infinity), or its volume is
    /// not representable.
    #[error("radius too large: {0}")]
    RadiusTooLarge(String),

    #[error("exponent is not metric-generating on the probed range: {0}")]
    NotMetricGenerating(String),

    /// `exp(-t psi)` has too much mass at high frequency for a density to
    /// exist or be resolved numerically.
    #[error("non-integrable: {0}")]
    NonIntegrable(String),

    #[error("frequency window too small: decay target not reached by xi_max = {xi_max}; use h <= {suggested_h}")]
    WindowTooSmall { xi_max: f64, suggested_h: f64 },

    #[error("density not positive at x = {x:?} (value {value})")]
    NonpositiveDensity { x: Vec<f64>, value: f64 },

    #[error("argument outside tabulated domain: {0}")]
    DomainExceeded(String),

    #[error("probe range insufficient to decide: {0}")]
    InsufficientRange(String),

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error("value overflows f64: {0}")]
    Overflow(String),

    #[error("row not defined at t = {t}: {reason}")]
    UnsupportedT { t: f64, reason: String },
}
