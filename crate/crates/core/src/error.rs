use thiserror::Error;

/// Errors raised while building or parsing the objects of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("token {position} (`{token}`): malformed token")]
    MalformedToken { position: usize, token: String },

    #[error("token {position} (`{token}`): index {index} out of range for {n} strands")]
    IndexOutOfRange {
        position: usize,
        token: String,
        index: usize,
        n: usize,
    },

    #[error("strand count must be at least 1")]
    NoStrands,

    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("the rewriting search supports at most {max} strands, got {n}")]
    TooManyStrands { n: usize, max: usize },

    #[error("word is not pure: its permutation image is {0}")]
    NotPure(String),

    #[error("invalid index pair ({0}, {1}) for {2} strands")]
    BadPair(usize, usize, usize),

    #[error("invalid permutation: {0}")]
    BadPermutation(String),

    #[error("malformed normal form: {0}")]
    MalformedNormalForm(String),

    #[error("malformed Gauss data: {0}")]
    MalformedGauss(String),

    #[error("move does not apply: {0}")]
    MoveMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
