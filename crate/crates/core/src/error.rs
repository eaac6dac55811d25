use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid prime {0}")]
    InvalidPrime(u64),
    #[error("certification failed after {attempts} attempts (unlucky sampling or prime too small)")]
    CertificationFailed { attempts: u32 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("rank deficient after {attempts} attempts (resample points or use a larger prime)")]
    RankDeficient { attempts: u32 },
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("prime {0} divides the discriminant")]
    RamifiedPrime(u64),
    #[error("exponent vector of total degree 0 in Bezout bound")]
    ZeroDegree,
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("certificate does not verify: {0}")]
    CertificateMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
