use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("scalars belong to different number fields")]
    FieldMismatch,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("unsupported internal dimension {0}: exact arrangements need n <= 2")]
    UnsupportedDimension(usize),
    #[error("singular position: lattice point {coords:?} projects onto a supporting hyperplane")]
    Singular { coords: Vec<i64> },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("rational input: continued fraction terminates")]
    RationalInput,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
