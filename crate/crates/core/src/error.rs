use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {0} is outside the supported range 3..=2^20")]
    PrimeOutOfRange(u64),
    #[error("{t} does not divide p-1 = {pm1}")]
    NotDivisor { t: u64, pm1: u64 },
    #[error("requested {n} elements but the field has only {p}")]
    SetTooLarge { n: usize, p: u64 },
    #[error("residue {x} is not reduced mod {p}")]
    NotReduced { x: u64, p: u64 },
    #[error("malformed set spec: {0}")]
    BadSpec(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("function is not invariant: f({x}*{gamma}) != f({x})")]
    NotInvariant { x: u64, gamma: u64 },
    #[error("function does not have zero mean")]
    NonZeroMean,
    #[error("set is not symmetric: {0} in P but -{0} is not")]
    NotSymmetric(u64),
    #[error("measure is not a symmetric probability measure: {0}")]
    BadMeasure(String),
    #[error("linear dependence among {0}")]
    Dependent(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
