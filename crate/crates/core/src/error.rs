use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relations contain a cycle through element {0}")]
    Cycle(usize),

    #[error("element {elem} out of range 1..={n}")]
    Range { elem: usize, n: usize },

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("pattern of size {pattern} does not fit a text of size {text}")]
    Size { pattern: usize, text: usize },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("line {line}: variable {var} occurs with both polarities in one clause")]
    Polarity { line: usize, var: usize },

    #[error("line {line}: expected exactly 3 literals, found {found}")]
    Arity { line: usize, found: usize },

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("part {0} is not a module")]
    NotAModule(usize),

    #[error("projected down-set count {projected} exceeds budget {budget}")]
    MemoryBudget { projected: u128, budget: u128 },

    #[error("gadget constraint violated: {0}")]
    Constraint(String),

    #[error("timed out after {0:?}")]
    Timeout(std::time::Duration),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }
}
