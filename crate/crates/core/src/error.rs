use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range for instance with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("instance has no terminals")]
    NoTerminals,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("{what} = {actual} exceeds cap {limit}{hint}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
        hint: &'static str,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
