//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field exponent must be at least 1")]
    InvalidExponent,
    #[error("field order {q} exceeds the bound {bound}")]
    FieldBoundExceeded { q: u64, bound: u64 },
    #[error("cannot invert zero")]
    ZeroInverse,
    #[error("matrix is singular (ad - bc = 0)")]
    SingularMatrix,
    #[error("field automorphism power {k} out of range (need 0 <= k < {r})")]
    AutomorphismPowerOutOfRange { k: u32, r: u32 },
    #[error("{0}")]
    KindConstraint(String),
    #[error("permutations act on different point sets")]
    DegreeMismatch,
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("group order {order} exceeds the census cap {cap}")]
    CensusCapExceeded { order: u64, cap: u64 },
    #[error("rank {0} out of range (supported: 3..=5)")]
    RankOutOfRange(u32),
    #[error("element id {0} out of range")]
    BadElementId(u32),
    #[error("subgroup sets belong to different groups")]
    ParentMismatch,
    #[error("multiplication table refused for order {0} (limit 16384)")]
    TableTooLarge(u64),
    #[error("the deduplication group does not normalize the search group")]
    ActionMismatch,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("search pool too large: {involutions} involutions in a group of order {order}")]
    SearchTooLarge { involutions: u64, order: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
