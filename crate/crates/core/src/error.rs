use thiserror::Error;

use crate::mhs::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("subspace is not contained in the given ambient subspace")]
    NotContained,

    #[error("matrix is not unipotent (M - 1 is not nilpotent)")]
    NotNilpotent,

    #[error("matrix is singular")]
    Singular,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("opposedness fails: {0}")]
    InvalidMhs(Violation),

    #[error("invalid delta datum: {0}")]
    InvalidDelta(String),

    #[error("bidegree violation: {0}")]
    Bidegree(String),

    #[error("transition matrix has non-monomial determinant")]
    NonMonomialDeterminant,

    #[error("zero leading coefficient in the generator change at ({p},{q})")]
    ZeroLeadingCoefficient { p: u32, q: u32 },

    #[error("rank check failed: {0}")]
    RankCheck(String),

    #[error("not a Lie element: {0}")]
    NotLie(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Malformed input as opposed to a mathematical violation; drives the CLI exit code.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch { .. }
                | Error::ShapeMismatch(_)
                | Error::InvalidFiltration(_)
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
