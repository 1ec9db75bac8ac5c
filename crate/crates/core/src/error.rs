use thiserror::Error;

/// Errors raised while configuring or advancing a simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid needs at least {min} cells, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("initial data violates {hypothesis}: {detail}")]
    Hypothesis { hypothesis: &'static str, detail: String },

    #[error("scalar solve for {what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("step {step} (t = {time}) failed: {source}")]
    StepFailed {
        step: u64,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("infeasible stationary state: {0}")]
    Infeasible(String),

    #[error("config error in {path}: {message}")]
    Config { path: String, message: String },

    #[error("refinement study: {0}")]
    Refinement(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}
