use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("level is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("repeated prime factor {0}")]
    RepeatedPrime(String),
    #[error("empty level: at least one prime factor is required")]
    EmptyLevel,
    #[error("q = {0} is not a supported prime power")]
    BadFieldSize(u64),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("e_H undefined: 3 divides the level")]
    EhUndefined,
    #[error("excluded case: {0}")]
    ExcludedCase(String),
    #[error("operation requires s = 1, got s = {0}")]
    NotPrimeLevel(usize),
    #[error("the trivial character has no associated value here")]
    TrivialCharacter,
    #[error("prime {0} divides the level")]
    PrimeDividesLevel(String),
    #[error("{0} does not divide the required level quotient")]
    NotADivisor(String),
    #[error("divisor has nonzero degree {0}")]
    NonzeroDegree(String),
    #[error("2 must be inverted to take e-parts")]
    TwoNotInverted,
    #[error("setting mismatch: {0}")]
    SettingMismatch(String),
    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("series leading coefficient is not a unit")]
    NonUnitLeading,
    #[error("element is not in L^0 (total valuation {0})")]
    NotInL0(String),
    #[error("inconsistent value: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
