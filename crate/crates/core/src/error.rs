use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Clifford dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("algebra dimension d = {d} exceeds the configured limit {limit}")]
    DimensionTooLarge { d: usize, limit: usize },
    #[error("module shape mismatch: expected n = {expected}, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("coefficient array has length {found}, expected 2^d = {expected}")]
    CoefficientLength { expected: usize, found: usize },
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("no anticommuting imaginary unit exists for d = 1")]
    NoAnticommutingUnit,
    #[error("not a unit imaginary paravector (|J| = {norm}, J0 = {real})")]
    NotImaginaryUnit { norm: f64, real: f64 },
    #[error("value is not a paravector")]
    NotParavector,
    #[error("s = {s0} + J {y} lies in the S-spectrum")]
    InSpectrum { s0: f64, y: f64 },
    #[error("point outside the function domain: {0}")]
    DomainViolation(String),
    #[error("stem violates the compatibility condition at y = 0 (|f1(x, 0)| = {0})")]
    CompatibilityFailure(f64),
    #[error("chirality mismatch: {0}")]
    ChiralityMismatch(&'static str),
    #[error("contour violation: {0}")]
    Contour(String),
    #[error("operator is not bisectorial: {0}")]
    NotBisectorial(String),
    #[error("growth class violation: {0}")]
    ClassViolation(String),
    #[error("quadrature error estimate {estimate:e} exceeds the accepted maximum {max:e}")]
    QuadratureTolerance { estimate: f64, max: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
