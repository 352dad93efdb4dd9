use thiserror::Error;

pub type Result<T> = std::result::Result<T, LieError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("structure constants violate the Jacobi identity on {} triple(s)", .0.len())]
    JacobiViolation(Vec<(usize, usize, usize)>),

    #[error("unknown catalog algebra {0:?}")]
    UnknownAlgebra(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("singular matrix")]
    Singular,

    #[error("integration blew up at t = {time}")]
    BlowUp { time: f64 },
}

impl LieError {
    pub(crate) fn mismatch(expected: usize, found: usize) -> Self {
        LieError::DimensionMismatch { expected, found }
    }
}
