use thiserror::Error;

/// Errors reported by the toolkit.
///
/// Admissibility rejections are deliberately *not* errors; they are ordinary
/// values of [`crate::arith::Rejection`]. This enum covers genuine faults:
/// inputs outside an operation's domain, or internal consistency checks that
/// can only fail on an implementation bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value must be at least 1, got 0")]
    ZeroValue,
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("prime family must be nonempty")]
    EmptyPrimeFamily,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("matrix must have determinant 1, got {0}")]
    DeterminantNotOne(String),
    #[error("map is not Anosov: trace {0} has absolute value <= 2")]
    NotAnosov(String),
    #[error("the requested power of the map is the identity; its fixed set is the whole torus")]
    IdentityPower,
    #[error("fixed set is infinite: det(M^k - I) = 0")]
    DegenerateFixedSet,
    #[error("cover is disconnected: the images do not generate the deck group")]
    DisconnectedCover,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("certification check failed: {0}")]
    CheckFailed(String),
    #[error("internal consistency fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
