use thiserror::Error;

/// Errors raised by the spectral geometry library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("spectral state undefined for O = 0: a non-zero operator is required")]
    ZeroOperator,

    #[error("invalid spectral state: {0}")]
    InvalidState(String),

    #[error("state is not strictly interior (min coordinate {min_coordinate}); {context}")]
    BoundaryState {
        min_coordinate: f64,
        context: &'static str,
    },

    #[error("geodesic endpoints coincide")]
    DegeneratePath,

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("composition annihilates the state: Σβⱼ²λⱼ = 0 (λ(BA) undefined)")]
    Annihilation,

    #[error("strict transport requires full support: {0}")]
    SupportViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
