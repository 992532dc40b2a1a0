use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is singular to working precision (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid fading spec: {0}")]
    InvalidFadingSpec(String),

    #[error("invalid channel spec: {0}")]
    InvalidChannelSpec(String),

    #[error("unsupported OSTBC configuration: {n_tx} transmit antennas at rate {rate}")]
    UnsupportedCode { n_tx: usize, rate: String },

    #[error("ML hypothesis space of {0} candidates exceeds the limit")]
    HypothesisSpace(u128),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn dims(expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            expected: expected.into(),
            got: got.into(),
        }
    }
}
