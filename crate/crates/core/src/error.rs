use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A state or argument outside the domain where the maps are defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {}", .0.violations().join("; "))]
    InvalidParameters(ValidationReport),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical check contradicted a result it was meant to confirm.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("integration became unstable at t = {t}: ({x}, {y})")]
    Instability { t: f64, x: f64, y: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
