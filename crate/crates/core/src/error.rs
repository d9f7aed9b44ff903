use thiserror::Error;

/// Errors raised by the monoid, basis, character and cycle operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: the degree must be at least 2")]
    InvalidModulus(u32),
    #[error("vector has {found} entries but M_{m} needs {expected}")]
    Shape { m: u32, expected: usize, found: usize },
    #[error("{vector} is not an element of M_{m}")]
    NotMember { m: u32, vector: String },
    #[error("{t} is not a unit modulo {m}")]
    NotUnit { m: u32, t: u32 },
    #[error("basis for m = {m} is incomplete; largest certified level is {max_level_seen}")]
    Incomplete { m: u32, max_level_seen: u32 },
    #[error("pool for m = {m} covers levels up to {available}, level {required} is required")]
    IncompletePool { m: u32, available: u32, required: u32 },
    #[error("character ({0}) is not a Hodge label")]
    NotHodgeLabel(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("moduli differ: {0} and {1}")]
    ModulusMismatch(u32, u32),
    #[error("cannot join: {0}")]
    Join(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
