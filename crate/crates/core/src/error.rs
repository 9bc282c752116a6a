use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {reason}")]
    Syntax { offset: usize, reason: String },

    #[error("jump counter must be at least 1 (offset {offset})")]
    ZeroCounter { offset: usize },

    #[error("empty input")]
    Empty,

    #[error("invalid action name `{0}`")]
    InvalidAction(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("action `{0}` is outside the domain of the bijection")]
    ActionOutsideDomain(String),

    #[error("bijections are defined over different action sets")]
    DomainMismatch,

    #[error("not a C-program: {0}")]
    NotAProgram(String),

    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: i64, len: usize },

    #[error("F({arg}) = {value} is outside 0..{n}")]
    FunctionOutOfRange { arg: usize, value: usize, n: usize },

    #[error("enumeration of {required} functions exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("stack `{focus}` exceeded capacity {capacity} along path [{}]", path.join(", "))]
    CapacityExceeded {
        focus: String,
        capacity: usize,
        path: Vec<String>,
    },

    #[error("invalid service description `{0}`")]
    InvalidService(String),
}
