use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("points {i} and {j} collide (distance {distance:e}); configuration is not simple")]
    Collision { i: usize, j: usize, distance: f64 },

    #[error("labelled state is not strictly increasing at index {index}")]
    NotOrdered { index: usize },

    #[error("truncation radius {radius} exceeds the configuration window {window}")]
    TruncationExceedsWindow { radius: f64, window: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{function}: argument {x} outside the supported range")]
    OutOfRange { function: &'static str, x: f64 },

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, state: Vec<f64>, reason: String },

    #[error("operator I - K is ill-conditioned (largest eigenvalue of K = {largest}, condition estimate {condition:e})")]
    IllConditioned { largest: f64, condition: f64 },

    #[error("discretized kernel has eigenvalue {eigenvalue} outside [0, 1]")]
    Discretization { eigenvalue: f64 },

    #[error("degenerate conditioning: {0}")]
    DegenerateConditioning(String),

    #[error("too few {what}: need at least {needed}, got {got}")]
    TooFew { what: &'static str, needed: usize, got: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
