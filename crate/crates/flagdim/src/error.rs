use thiserror::Error;

/// Errors across the library.
///
/// The CLI maps these onto its exit-code contract: input validation
/// failures exit 2, inputs outside the rule/theorem coverage exit 3, and
/// internal invariant violations exit 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("integer must be positive")]
    ZeroValue,

    #[error("integer {0} exceeds the supported range (2^63)")]
    ValueTooLarge(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{divisor} does not divide {of}")]
    NotADivisor { divisor: u64, of: u64 },

    #[error("invalid flag signature: {0}")]
    InvalidFlag(String),

    #[error("reduced dimension {d} out of range 1..{max} for index {index}")]
    DimensionOutOfRange { d: u64, index: u64, max: u64 },

    #[error("incompatible primary decompositions: {0}")]
    IncompatibleDecomposition(String),

    #[error("expression is not in primary-decomposed form: {0}")]
    NotDecomposed(String),

    #[error("p must be zero or a prime, got {0}")]
    InvalidPrimeParameter(u64),

    #[error("simple-root index {k} out of range 1..{n}")]
    RootIndexOutOfRange { k: usize, n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unsupported root subset: {0}")]
    UnsupportedSubset(String),

    #[error("hypothesis not met: {0}")]
    HypothesisViolated(String),

    #[error("certificate re-check failed: {0}")]
    CertificateCheck(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
