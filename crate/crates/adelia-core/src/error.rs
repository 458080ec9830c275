use thiserror::Error;

/// Errors shared across the engine. Variant names match the failure modes of
/// the operations that raise them.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring family admits no Smith normal form: {0}")]
    NonPidRing(String),
    #[error("prime {0} is invertible or invalid in this ring")]
    BadPrime(String),
    #[error("valuation of zero is undefined")]
    ZeroElement,
    #[error("incompatible rings: {0}")]
    RingMismatch(String),
    #[error("prime set must be nonempty")]
    EmptyPrimeSet,
    #[error("duplicate (associate) prime: {0}")]
    DuplicatePrime(String),
    #[error("{0} is not prime/irreducible")]
    InvalidPrime(String),
    #[error("relations do not define a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("dimension must strictly increase along chains: {0}")]
    DimensionViolation(String),
    #[error("flag is not reduced: {0}")]
    UnreducedFlag(String),
    #[error("subset of [n] must be nonempty")]
    EmptySubset,
    #[error("injection arity does not match subset cardinality: {0}")]
    ArityMismatch(String),
    #[error("coefficient module is not finite length")]
    NotFiniteLength,
    #[error("unsupported ring or coefficient family: {0}")]
    UnsupportedFamily(String),
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("support dimension exceeds the requested index: {0}")]
    SupportTooLarge(String),
    #[error("ring is not a localization at a single prime: {0}")]
    NotLocal(String),
    #[error("cube diagram does not commute: {0}")]
    NonCommutingCube(String),
    #[error("cosimplicial identities violated: {0}")]
    IdentityViolation(String),
    #[error("idele has a zero component at {0}")]
    ZeroComponent(String),
    #[error("ring class outside the K-theory table: {0}")]
    UnknownRingClass(String),
    #[error("invalid construction: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
