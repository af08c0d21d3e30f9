use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("k = {k} exceeds n = {n}")]
    WeightExceedsLength { n: u64, k: u64 },

    #[error("logarithm of zero")]
    LogOfZero,

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("n = {n} exceeds the enumeration limit of {limit}")]
    EnumerationLimit { n: u64, limit: u64 },

    #[error("block has length {got}, expected {expected}")]
    BlockLength { expected: usize, got: usize },

    #[error("invalid symbol {symbol:?} for radix {radix}")]
    InvalidSymbol { symbol: char, radix: u32 },

    #[error("word is not a codeword of this codebook")]
    NotACodeword,

    #[error("index {index} out of range for a codebook of size {size}")]
    IndexOutOfRange { index: String, size: String },

    #[error("parse error: {0}")]
    Parse(String),
}
