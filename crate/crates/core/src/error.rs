use thiserror::Error;

/// Errors surfaced by the hedging engines.
#[derive(Error, Debug, Clone)]
pub enum HedgeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical derivative failed: {0}")]
    NumericalDerivative(String),

    #[error("ellipticity violation: {0}")]
    EllipticityViolation(String),

    #[error("expansion order {order} exceeds supported cap {cap}")]
    UnsupportedOrder { order: usize, cap: usize },

    #[error("integration error: {0}")]
    IntegrationError(String),

    #[error("no closed-form density for model: {0}")]
    UnsupportedModel(String),

    #[error("branch-cut discontinuity along inversion contour: {0}")]
    ContourError(String),

    #[error("transform evaluated outside admissible region: {0}")]
    DomainError(String),

    #[error("inversion imaginary residual {residual:e} exceeds tolerance for result {value:e}")]
    InversionInaccuracy { residual: f64, value: f64 },

    #[error("redundant hedging instruments (strikes {first} and {second}): {detail}")]
    RedundantInstrument {
        first: String,
        second: String,
        detail: String,
    },

    #[error("terminal state is missing a coordinate required by the claim: {0}")]
    StateMismatch(String),

    #[error("simulation produced a non-finite value at step {step}: {detail}")]
    SimulationError { step: usize, detail: String },

    #[error("conditioning failed: {0}")]
    ConditioningError(String),

    #[error("strike grid unusable: {0}")]
    GridError(String),

    #[error("input not smooth enough: {0}")]
    SmoothnessError(String),

    #[error("degenerate underlying: {0}")]
    DegenerateUnderlying(String),

    #[error("cost-constraint system is degenerate: {0}")]
    ConstraintDegeneracy(String),
}

pub type Result<T> = std::result::Result<T, HedgeError>;
