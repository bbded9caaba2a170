use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("ring of cardinality {cardinality} exceeds the enumeration bound {bound}")]
    UnsupportedSize { cardinality: String, bound: u64 },

    #[error("operands belong to different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },

    #[error("element is not a unit")]
    NotUnit,

    #[error("residue is not a square in the residue field")]
    NotSquare,

    #[error("branch {branch} is not a square root of the residue {residue}")]
    BadBranch { branch: u8, residue: u8 },

    #[error("constant term is not in the maximal ideal")]
    NonNilpotentConstant,

    #[error("precision underflow: result would have precision {0}")]
    PrecisionUnderflow(i64),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("conductor undefined: the automorphism is the identity at precision {0}")]
    IdentityAtPrecision(usize),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("expression is not invertible")]
    NotInvertible,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }
}
