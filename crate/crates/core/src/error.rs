use thiserror::Error;

use crate::protocol::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(u32),

    #[error("symbol {symbol} at position {position} is outside 1..={size}")]
    InvalidWord { symbol: u32, position: usize, size: u32 },

    #[error("alphabet mismatch: expected k={expected}, found k={found}")]
    AlphabetMismatch { expected: u32, found: u32 },

    #[error("request for {requested} words exceeds the enumeration cap of {cap}")]
    CapExceeded { requested: String, cap: u64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown language `{0}`")]
    UnknownLanguage(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("rank {rank} is outside the covered range of the bijection ({detail})")]
    Coverage { rank: String, detail: String },

    #[error("accepting fraction of an empty set is undefined")]
    UndefinedFraction,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("no slice for parameter value {0}")]
    MissingSlice(String),

    #[error("device failure: {message}")]
    Device { message: String, partial: Box<VerificationReport> },
}

impl Error {
    pub(crate) fn cap(requested: impl ToString, cap: u64) -> Self {
        Error::CapExceeded { requested: requested.to_string(), cap }
    }
}
