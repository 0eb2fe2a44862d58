use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the p-adic valuation of 0 is infinite")]
    ZeroValuation,

    #[error("{0:?} is not stable under division (missing divisor {1})")]
    NotDivisionStable(Vec<u64>, u64),

    #[error("truncation set mismatch: {0}")]
    TruncationMismatch(String),

    #[error("ghost vector is not in the image of the ghost map (index {0})")]
    NonIntegralGhost(u64),

    #[error("truncation set is not a p-typical segment")]
    NotPTypical,

    #[error("inconsistent p-typical decomposition: {0}")]
    InconsistentDecomposition(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("u = {u} is below the stabilization bound (need p^u j > {bound})")]
    BelowStabilization { u: u32, bound: u64 },

    #[error("no certificate found within search bound {0}")]
    SearchExhausted(u64),

    #[error("malformed chain complex: {0}")]
    MalformedComplex(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
