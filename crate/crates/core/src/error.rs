use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },

    #[error("entry (1,1) is epsilon, cannot normalise a rank-one factorisation")]
    EpsilonPivot,

    #[error("matrix family is empty")]
    EmptyFamily,

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("member index {index} out of range for a family of {members}")]
    IndexOutOfRange { index: usize, members: usize },

    #[error("product sequence is empty")]
    EmptySequence,

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
