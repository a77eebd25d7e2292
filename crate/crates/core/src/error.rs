use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} outside supported range")]
    DimensionOutOfRange(usize),
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix entry count {found} does not match dimension {dim}")]
    MalformedMatrix { dim: usize, found: usize },
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("angle {name} = {value} outside its domain")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error("spin expectation {0} outside [-1, 1]")]
    ExpectationOutOfRange(f64),
    #[error("need at least {needed} observables, got {got}")]
    TooFewObservables { needed: usize, got: usize },
    #[error("empty term list")]
    EmptyTerms,
    #[error("pauli index {0} not in 1..=3")]
    InvalidPauliIndex(usize),
    #[error("variance {0:e} is negative beyond round-off")]
    NegativeVariance(f64),
    #[error("count vector is empty or has zero total")]
    ZeroTotal,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
