use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Cartan kind `{0}` (expected A1.., D4.., E6, E7 or E8)")]
    InvalidKind(String),

    #[error("node index {index} out of range for rank {rank}")]
    InvalidNode { index: usize, rank: usize },

    #[error("flag variety has even dimension {0}; it cannot carry a contact structure")]
    DimensionNotOdd(usize),

    #[error("not the contact parabolic: {0}")]
    NotContactParabolic(String),

    #[error("Jacobi identity violated on basis triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),

    #[error("isotropic Grassmannian needs n >= 4, got n = {0}")]
    InvalidN(usize),

    #[error("matrix is not antisymmetric: |xi + xi^T| = {0:e}")]
    NotAntisymmetric(f64),

    #[error("invalid isotropic frame: {0}")]
    InvalidFrame(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("no basis of the contact distribution found: {0}")]
    BasisNotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
