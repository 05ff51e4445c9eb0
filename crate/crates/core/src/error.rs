use alloc::string::String;

/// Errors raised by the numerical kernels, state constructors and bound evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is not complex symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },
    #[error("operator is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetricOperator { deviation: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem index {index} out of range for {parties} parties")]
    BadSubsystemIndex { index: usize, parties: usize },
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("decomposition size {size} smaller than rank {rank}")]
    SizeTooSmall { size: usize, rank: usize },
    #[error("dimension {0} too small, need at least 2")]
    DimensionTooSmall(usize),
    #[error("invalid split: {0}")]
    BadSplit(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("k = {k} not in [1, {n}]")]
    BadK { k: usize, n: usize },
    #[error("invalid subset selector: {0}")]
    BadSubset(String),
    #[error("coefficient modulus {modulus} exceeds 1")]
    CoefficientTooLarge { modulus: f64 },
    #[error("expected two-qubit dimensions [2, 2]")]
    WrongDims,
    #[error("expected {expected} parties, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("coefficient vector has squared norm {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    #[error("family not detected at upper end p = {p} (value {value:.3e})")]
    NotDetectedAtUpperEnd { p: f64, value: f64 },
    #[error("family already detected at lower end p = {p} (value {value:.3e})")]
    DetectedAtLowerEnd { p: f64, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
