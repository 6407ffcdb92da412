use thiserror::Error;

/// Errors raised by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has a vanishing constant term (zero root)")]
    ZeroRoot,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("p-adic valuation applied to the non-constant function {0}")]
    NonConstantPAdic(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("valuation {0} is not discrete")]
    NonDiscreteValuation(String),
    #[error("pole at s = {s}: denominator evaluates to {den:e}")]
    Pole { s: f64, den: f64 },
    #[error("f vanishes at s = {0}")]
    ZeroAtSample(f64),
    #[error("coordinates sum to {0}, expected 0")]
    NonZeroSum(f64),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("spectra are defined on different word sets")]
    WordSetMismatch,
    #[error("generator index {index} out of range ({count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("ball radius {0} exceeds the limit of {max}", max = crate::groups::MAX_RADIUS)]
    RadiusTooLarge(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("root finder failed to converge for a degree {0} polynomial")]
    RootFinding(usize),
}

impl Error {
    /// True for violations of a mathematical precondition (as opposed to
    /// malformed input).
    pub fn is_math_precondition(&self) -> bool {
        matches!(
            self,
            Error::Determinant(_)
                | Error::Singular
                | Error::NotSpd
                | Error::Pole { .. }
                | Error::ZeroAtSample(_)
                | Error::NonZeroSum(_)
                | Error::NotMonic
                | Error::ZeroRoot
                | Error::NonConstantPAdic(_)
                | Error::NonDiscreteValuation(_)
                | Error::RootFinding(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
