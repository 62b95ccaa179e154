use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Two consecutive states on a path are (numerically) orthogonal, so the
    /// discrete connection between them is undefined.
    #[error("degenerate step {index}: overlap {overlap:.3e} between consecutive states; refine the discretization")]
    DegenerateStep { index: usize, overlap: f64 },

    /// Consecutive polygon vertices are antipodal and the geodesic joining
    /// them is not unique.
    #[error("degenerate geodesic: vertices {index} and {next} are antipodal")]
    DegenerateGeodesic { index: usize, next: usize },

    #[error("undefined conditional probability: no coincidences involve detector {0}")]
    UndefinedConditional(usize),

    #[error("undefined visibility: classical coincidence baseline is zero")]
    UndefinedVisibility,

    #[error("fit error: {0}")]
    Fit(String),

    #[error("undefined relative standard error: {0}")]
    UndefinedRse(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
