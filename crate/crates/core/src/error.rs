use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclic group order must be positive")]
    ZeroOrder,

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },

    #[error("element {index} does not belong to a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("invalid Cayley table: {0}")]
    CayleyTable(String),

    #[error("Cayley table is not associative: ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")]
    NotAssociative {
        a: usize,
        b: usize,
        c: usize,
        left: usize,
        right: usize,
    },

    #[error("Cayley table has no two-sided identity")]
    NoIdentity,

    #[error("element {0} has no inverse")]
    NoInverse(usize),

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("cycle length {k} out of range 1..={n}")]
    CycleLengthOutOfRange { k: usize, n: usize },

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
