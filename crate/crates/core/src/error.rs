use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e} below floor {floor:e})")]
    NotPositiveDefinite { eigenvalue: f64, floor: f64 },
    #[error("model is critical: smallest eigenvalue {eigenvalue:e} of the coupling matrix")]
    Critical { eigenvalue: f64 },
    #[error("ill-conditioned submatrix: {0}")]
    Conditioning(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("quadrature accuracy not reached: {0}")]
    Accuracy(String),
    #[error("outside the range of the asymptotic lemma: {0}")]
    LemmaScope(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("system too large: {0}")]
    Size(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
