use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: &'static str,
    },

    #[error("prime table with limit {limit} cannot factor {n}")]
    InsufficientTable { n: u64, limit: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not square-free")]
    NotSquareFree(u64),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(what: &'static str, value: impl ToString, allowed: &'static str) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            allowed,
        }
    }
}
