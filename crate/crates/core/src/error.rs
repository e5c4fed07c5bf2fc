use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("generators share the hyperbolic orbit h({0},{1})")]
    SharedHyperbolic(u64, u64),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unbounded enumeration: {0}")]
    Unbounded(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("search node limit of {0} exceeded")]
    NodeLimit(u64),

    #[error("invalid path: {0}")]
    InvalidPath(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
