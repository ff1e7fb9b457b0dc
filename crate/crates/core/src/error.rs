use thiserror::Error;

/// Errors raised while parsing, validating or analysing transducers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("invalid machine: {0}")]
    Invalid(String),

    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),

    #[error("cannot split `{0}` into alphabet letters")]
    Tokenize(String),

    #[error("matrix index mismatch: {0}")]
    IndexMismatch(String),

    #[error("input is outside the domain")]
    DomainMiss,

    #[error("machine is not 1-bounded (witness `{0}`)")]
    NotOneBounded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("formula variable `{0}` has no value")]
    Unvalued(String),

    #[error("position {pos} is out of range for a word of length {len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("resource limit of {0} steps exceeded")]
    Budget(u64),

    #[error("malformed transducer: copy {copy} at position {pos} has labels {first} and {second}")]
    LabelClash {
        copy: usize,
        pos: usize,
        first: String,
        second: String,
    },

    #[error("output is not a string: {0}")]
    NotAString(String),

    #[error("lookahead guards overlap at state {state} on `{letter}`")]
    LookaheadConflict { state: String, letter: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
