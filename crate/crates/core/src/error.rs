use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed rational and float operands")]
    MixedMode,
    #[error("{0} of a non-trivial argument has no exact rational value")]
    Transcendental(&'static str),
    #[error("function is not smooth here: {0}")]
    NonSmooth(&'static str),
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("linear map is singular")]
    SingularMap,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
