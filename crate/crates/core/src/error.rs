use std::path::PathBuf;

/// Errors raised across the decoding library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration budget exceeded: dimension {k} > {max}; use a weight cap and shell collection instead")]
    EnumerationBudget { k: usize, max: usize },

    #[error("radius index {requested} exceeds available shells (largest index {available})")]
    RadiusTooLarge { requested: usize, available: usize },

    #[error("code kind does not support this operation: {0}")]
    UnsupportedCode(&'static str),

    #[error("malformed sphere file: {0}")]
    MalformedSphere(String),

    #[error("sphere file checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing sphere file {}", .0.display())]
    MissingSphere(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
