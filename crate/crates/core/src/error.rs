use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpecflowError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecflowError {
    #[error("input is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("input is not unitary (defect {defect:.3e})")]
    NonUnitaryInput { defect: f64 },

    #[error("input is not an orthogonal projection (defect {defect:.3e})")]
    NotAProjection { defect: f64 },

    #[error("shift {re}+{im}i lies on the spectrum (distance {distance:.3e})")]
    SingularShift { re: f64, im: f64, distance: f64 },

    #[error("window endpoint {endpoint} lies on the spectrum (distance {distance:.3e})")]
    BoundaryOnSpectrum { endpoint: f64, distance: f64 },

    #[error("eigenvalue within {distance:.3e} of +-1, inverse Riesz map undefined")]
    NearUnitEigenvalue { distance: f64 },

    #[error("projection pair is not invertible (condition number {condition:.3e})")]
    NonInvertiblePair { condition: f64 },

    #[error("1 is (numerically) an eigenvalue: phase distance {distance:.3e}")]
    UnitEigenvalue { distance: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("eigenvalue {value} has infinite multiplicity inside the requested window")]
    InfiniteMultiplicity { value: f64 },

    #[error("invalid diagonal operator: {0}")]
    InvalidDiagonal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("cannot certify a window at sample {sample} (t = {param})")]
    CannotCertify { sample: usize, param: f64 },

    #[error("partition does not certify the path: {0}")]
    UncertifiedPartition(String),

    #[error("path endpoints do not match (defect {defect:.3e})")]
    EndpointMismatch { defect: f64 },

    #[error("index {index} outside 1..={horizon}")]
    BadIndex { index: usize, horizon: usize },

    #[error("numerical routine failed to converge: {0}")]
    NoConvergence(&'static str),
}
