use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid word length {0} (must be 1..=64)")]
    InvalidLength(usize),

    #[error("value {value} does not fit in {len} bits")]
    ValueOutOfRange { value: u64, len: usize },

    #[error("matrix is rank deficient (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("code too large for this operation: {0}")]
    TooLarge(String),

    #[error("word is not a codeword")]
    NotACodeword,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed netpbm data at byte {offset}: {msg}")]
    Format { offset: usize, msg: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
