use std::fmt;

use cliffspec::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Algebra dimension above the configured cap (exit 3).
    DimLimit { d: usize, limit: usize },
    /// A precondition of the requested computation failed (exit 4).
    Precondition { reason: &'static str, message: String },
    /// Quadrature estimate above `--max-err` (exit 5).
    Tolerance { estimate: f64, max: f64 },
    /// Output could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::DimLimit { .. } => 3,
            CliError::Precondition { .. } => 4,
            CliError::Tolerance { .. } => 5,
        }
    }

    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::DimLimit { .. } => "dimension-limit",
            CliError::Precondition { reason, .. } => reason,
            CliError::Tolerance { .. } => "quadrature-tolerance",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "exit": self.exit_code(),
            "reason": self.reason(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Io(m) => f.write_str(m),
            CliError::DimLimit { d, limit } => {
                write!(f, "d = {d} exceeds the dimension limit {limit} (set CLIFFSPEC_DLIMIT to raise it)")
            }
            CliError::Precondition { message, .. } => f.write_str(message),
            CliError::Tolerance { estimate, max } => {
                write!(f, "quadrature estimate {estimate:e} exceeds --max-err {max:e}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let reason = match &e {
            Error::DimensionTooLarge { d, limit } => return CliError::DimLimit { d: *d, limit: *limit },
            Error::QuadratureTolerance { estimate, max } => {
                return CliError::Tolerance { estimate: *estimate, max: *max }
            }
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::ShapeMismatch { .. } => "shape-mismatch",
            Error::CoefficientLength { .. } => "coefficient-length",
            Error::NotInvertible(_) => "not-invertible",
            Error::NoAnticommutingUnit => "no-anticommuting-unit",
            Error::NotImaginaryUnit { .. } => "not-imaginary-unit",
            Error::NotParavector => "not-paravector",
            Error::InSpectrum { .. } => "in-spectrum",
            Error::DomainViolation(_) => "domain-violation",
            Error::CompatibilityFailure(_) => "compatibility",
            Error::ChiralityMismatch(_) => "chirality-mismatch",
            Error::Contour(_) => "contour",
            Error::NotBisectorial(_) => "not-bisectorial",
            Error::ClassViolation(_) => "growth-class",
            Error::InvalidArgument(_) => "invalid-argument",
        };
        CliError::Precondition { reason, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
