use thiserror::Error;

/// Errors raised by the exterior-algebra, spectral and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a grade-{expected} element, found grade {found}")]
    WrongGrade { expected: usize, found: String },

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("invalid blade: {0}")]
    InvalidBlade(String),

    #[error("normal vector is not a unit vector (|nu|^2 = {norm_sq})")]
    NotUnit { norm_sq: f64 },

    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("size mismatch: expected {expected} values, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("invalid integrability exponent {0}")]
    InvalidExponent(f64),

    #[error("exponents violate 1/q = 1/p - alpha/n (p = {p}, q = {q}, alpha = {alpha}, n = {n})")]
    ExponentRelation { p: f64, q: f64, alpha: f64, n: usize },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("time index {index} is not on a mesh with {nodes} nodes")]
    TimeNotOnMesh { index: usize, nodes: usize },

    #[error("source trajectory has {available} nodes, {required} required")]
    MissingSourceNodes { required: usize, available: usize },

    #[error("induction paths disagree: relative defect {defect:e} exceeds {tolerance:e}")]
    NumericalConsistency { defect: f64, tolerance: f64 },

    #[error(
        "Picard iteration is not contracting after {iteration} iterations \
         (last distances {distances:?}); try smaller data or a smaller horizon T"
    )]
    NonContraction { iteration: usize, distances: Vec<f64> },

    #[error("horizon underflow: T = {horizon:e} is below mesh resolution; last measured norm {norm:e}")]
    HorizonUnderflow { horizon: f64, norm: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed field data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
