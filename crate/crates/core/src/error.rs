use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word is not reduced at letter {0}")]
    NotReduced(usize),
    #[error("cannot parse word `{input}`: {reason}")]
    WordSyntax { input: String, reason: String },
    #[error("invalid group descriptor: {0}")]
    Descriptor(String),
    #[error("operation needs a nonempty set")]
    EmptySet,
    #[error("budget exhausted after {0} steps")]
    Exhausted(u64),
    #[error("unsupported for this group: {0}")]
    Unsupported(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("edge undecided after {0} refinements of the distance oracle")]
    Precision(u32),
    #[error("sequence program is undefined at index {0}")]
    Partial(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
