use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),
    #[error("invalid skew-symmetrizer: {0}")]
    InvalidSymmetrizer(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not in SL±: |det| = {0}")]
    NotUnimodular(String),
    #[error("rank-2 hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("q-exponent cutoff overflow: {0}")]
    CutoffOverflow(String),
    #[error("point outside convergence strip: {0}")]
    OutsideStrip(String),
    #[error("too close to a pole: {0}")]
    NearPole(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
