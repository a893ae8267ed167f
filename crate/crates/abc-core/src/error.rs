use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A composite cofactor could not be split within the factoring budget.
    #[error("factorization budget exceeded; unsplit composite cofactor {cofactor}")]
    BudgetExceeded { cofactor: BigUint },

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("{p} divides {n}; arguments must be coprime")]
    NotCoprime { n: BigUint, p: BigUint },

    #[error("ord_{p}({c}) does not divide {k}")]
    OrderDoesNotDivide { c: BigUint, p: BigUint, k: u64 },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("family hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("input triple is not an abc triple")]
    NotAbcInput,

    #[error("exponent must be odd")]
    EvenExponent,

    #[error("no divisor satisfies the cosocle condition; triple is not abc")]
    NotAbc,

    #[error("segment [{lo}, {hi}) exceeds the configured memory budget")]
    SegmentTooLarge { lo: u64, hi: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("triple list verification failed at lines {0:?}")]
    VerificationFailed(Vec<usize>),

    #[error("delta ratio has an empty denominator")]
    EmptyDenominator,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
