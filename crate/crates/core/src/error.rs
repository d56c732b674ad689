use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("profile returned a non-finite value g({z}) = {value}")]
    NonFiniteProfile { z: f64, value: f64 },

    #[error("profile fails the decay conditions: {0}")]
    DecayViolation(String),

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:.3e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("solver aborted at step {step}: {message}")]
    Solver { step: usize, message: String },

    #[error("analysis failed: {0}")]
    Analysis(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
