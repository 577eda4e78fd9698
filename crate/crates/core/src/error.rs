use thiserror::Error;

pub type Result<T> = std::result::Result<T, DecodeError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("missing table: {0}")]
    MissingTable(String),

    #[error("malformed byte stuffing at offset {offset}: 0xFF followed by {next:#04x}")]
    MalformedStuffing { offset: usize, next: u8 },

    #[error("entropy-coded segment is empty")]
    EmptyScan,

    #[error("read past end of entropy-coded data at bit {position}")]
    OutOfBits { position: usize },

    #[error("invalid Huffman code at bit {position}")]
    InvalidCode { position: usize },

    #[error("Huffman code lengths oversubscribe the code space")]
    OversubscribedCode,

    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
}

impl DecodeError {
    /// Process exit status used by the command-line front end, one per kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            DecodeError::UnsupportedFeature(_) => 10,
            DecodeError::MalformedHeader(_) => 11,
            DecodeError::MissingTable(_) => 12,
            DecodeError::MalformedStuffing { .. } => 13,
            DecodeError::EmptyScan => 14,
            DecodeError::OutOfBits { .. } => 15,
            DecodeError::InvalidCode { .. } => 16,
            DecodeError::OversubscribedCode => 17,
            DecodeError::ConsistencyFailure(_) => 18,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DecodeError::UnsupportedFeature(_) => "UnsupportedFeature",
            DecodeError::MalformedHeader(_) => "MalformedHeader",
            DecodeError::MissingTable(_) => "MissingTable",
            DecodeError::MalformedStuffing { .. } => "MalformedStuffing",
            DecodeError::EmptyScan => "EmptyScan",
            DecodeError::OutOfBits { .. } => "OutOfBits",
            DecodeError::InvalidCode { .. } => "InvalidCode",
            DecodeError::OversubscribedCode => "OversubscribedCode",
            DecodeError::ConsistencyFailure(_) => "ConsistencyFailure",
        }
    }
}
