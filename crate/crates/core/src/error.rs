use thiserror::Error;

/// Errors produced by the construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) out of bounds for a {n_rows}x{n_cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("duplicate matrix entry ({0}, {1})")]
    DuplicateEntry(usize, usize),

    #[error("basis vectors are linearly dependent")]
    DependentVectors,

    #[error("invalid carpet parameters: {0}")]
    InvalidCarpet(String),

    #[error("boundary maps do not compose to zero at degree {0}")]
    BoundaryNotClosed(usize),

    #[error("X and Z stabilizers do not commute")]
    NonCommuting,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("expected a complex with {expected} spaces, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("degree {degree} out of range for a complex of top degree {top}")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("interaction {index} has coupling {value}; strictly positive couplings required")]
    NonPositiveCoupling { index: usize, value: f64 },

    #[error("{spins} spins exceeds the enumeration cap of {cap}")]
    TooManySpins { spins: usize, cap: usize },

    #[error("interaction {index} acts on {size} spins; cluster updates need 2-body terms")]
    NotTwoBody { index: usize, size: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("not a recognized product code: {0}")]
    NotAProduct(String),

    #[error("slice not found: {0}")]
    SliceNotFound(String),

    #[error("inverse-temperature grids do not overlap")]
    NoOverlap,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
