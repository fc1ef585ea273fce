use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("dimension {0} is even; operation needs odd d")]
    UnsupportedParity(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid file: {0}")]
    InvalidFile(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(
        "fiducial search failed after {restarts} restarts (best residual {best_residual:.3e})"
    )]
    SearchFailed { best_residual: f64, restarts: usize },

    #[error("not a SIC: {0}")]
    NotASic(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("not reconstructible: {0}")]
    NotReconstructible(String),

    #[error("not an angle tensor: {0}")]
    NotAnAngleTensor(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("not decomposable: {0}")]
    NotDecomposable(String),

    #[error("not a basis: {0}")]
    NotABasis(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}
