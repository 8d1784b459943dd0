use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("evaluation point {k} is below the minimum {min}")]
    EvalPointTooSmall { k: u64, min: u64 },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("unknown polynomial family `{0}` (expected `g` or `f`)")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnityError {
    #[error("n = {0} is outside the domain n >= 2")]
    TooSmall(u64),
    #[error("sieve limit {limit} exceeds the configured cap {cap}")]
    SieveTooLarge { limit: u64, cap: u64 },
    #[error("{n} is beyond the sieve limit {limit}")]
    BeyondSieve { n: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain generator k = {0} must be at least 3")]
    BadGenerator(u64),
    #[error("chain position i = {0} must be at least 2")]
    BadPosition(u32),
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("{a} is not in A({n})")]
    NotMember { a: String, n: String },
    #[error("{a} is a trivial element of A({n}); descent needs 1 < a < n-1")]
    Trivial { a: String, n: String },
    #[error("descent lost integrality at pair ({r}, {a}) for z = {z}")]
    NonIntegral { r: String, a: String, z: String },
    #[error(transparent)]
    Unity(#[from] UnityError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("x = {0} is below the smallest chain member 8")]
    TooSmall(u64),
    #[error("x = {x} exceeds the supported maximum {max}")]
    TooLarge { x: u64, max: u64 },
    #[error("k range [{lo}, {hi}] is outside [3, {max}]")]
    BadRange { lo: u64, hi: u64, max: u64 },
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("member list of {0} entries exceeds the memory cap")]
    MemoryCap(usize),
    #[error("thread pool: {0}")]
    Pool(String),
}
