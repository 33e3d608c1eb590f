use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is outside the supported range (odd primes below 65536)")]
    UnsupportedModulus(u32),
    #[error("field F_{p} is too small for n = {n}: experiments need p odd and p > n")]
    FieldTooSmall { p: u32, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix has determinant {0}, not 1")]
    NotInGroup(u32),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("element budget exceeded after {partial} elements")]
    BudgetExceeded { partial: usize },
    #[error("time budget exceeded after {partial} elements")]
    TimeExceeded { partial: usize },
    #[error("group order {group_order} exceeds the closure budget {budget}")]
    Indeterminate { group_order: u128, budget: usize },
    #[error("witness is not regular semisimple")]
    InvalidWitness,
    #[error("torus is not split over the base field")]
    UnsupportedTorus,
    #[error("element does not commute with the torus witness")]
    NotInTorus,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("no bins to choose from")]
    NoBins,
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("coordinate product is {0}, expected 1")]
    ProductNotOne(u32),
    #[error("|f(S)| = {image} is below |S|/n! = {size}/{factorial}")]
    FiberBoundViolated { image: usize, size: usize, factorial: u64 },
    #[error("fiber certificate failed: y.x = {value} is not in X")]
    CertificateFailed { value: u32 },
    #[error("no generating set found after {0} attempts")]
    GenerationFailed(usize),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
