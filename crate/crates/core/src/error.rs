use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("expected integer entries, found {0}")]
    NotIntegral(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope has dimension {dim} in ambient dimension {ambient}; project to its affine hull first")]
    NotFullDim { dim: usize, ambient: usize },
    #[error("polytope has no points")]
    EmptyPolytope,
    #[error("constraint system is unbounded")]
    Unbounded,
    #[error("vectors do not positively span the space")]
    NotSpanning,
    #[error("operation requires a lattice polytope")]
    LatticeRequired,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("MILP is infeasible within box bound {0}; consider raising the box")]
    MilpInfeasible(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
