use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data has {len} entries, expected {expected}")]
    NotSquare { len: usize, expected: usize },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid qudit dimension {0}, need d >= 2")]
    InvalidQuditDim(usize),

    #[error("invalid Fock cutoff {0}, need n_max >= 1")]
    InvalidCutoff(usize),

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
