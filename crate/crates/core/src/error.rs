use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e}): {what}")]
    Convergence {
        what: String,
        iterations: usize,
        residual: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("positivity lost at t = {t}: {detail}")]
    Positivity { t: f64, detail: String },

    #[error("boundary tolerance exceeded: {0}")]
    Boundary(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
