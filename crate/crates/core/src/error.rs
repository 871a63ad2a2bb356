//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors raised by group algebra, simulation, and fitting routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands act on different qubit counts.
    DimensionMismatch { left: usize, right: usize },
    /// Dense realization requested above the supported qubit count.
    TooManyQubits { n: usize, max: usize },
    /// Group closure exceeded the caller-supplied cap.
    GroupCapExceeded { cap: usize },
    /// Element is not a member of the catalog.
    ElementNotInCatalog,
    /// Gate references a qubit outside the register.
    QubitOutOfRange { qubit: usize, n: usize },
    /// Channel failed the trace-preservation check.
    NotTracePreserving { deviation_milli: u32 },
    /// Twirling group is not an orthogonal 2-design.
    NotTwoDesign { frame_potential_milli: u32 },
    /// Fit did not converge within the iteration budget.
    FitNonConvergence { iterations: usize },
    /// Fit data carries no decay signal (constant series at the asymptote).
    DegenerateFitData,
    /// Fewer distinct sequence lengths than the fit requires.
    InsufficientData { needed: usize, got: usize },
    /// Parameter outside its documented domain.
    InvalidParameter(String),
    /// Malformed catalog text.
    CatalogParse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "qubit count mismatch: {left} vs {right}")
            }
            Error::TooManyQubits { n, max } => {
                write!(f, "dense realization supports at most {max} qubits, got {n}")
            }
            Error::GroupCapExceeded { cap } => {
                write!(f, "group closure exceeded cap of {cap} elements")
            }
            Error::ElementNotInCatalog => write!(f, "element not found in catalog"),
            Error::QubitOutOfRange { qubit, n } => {
                write!(f, "qubit index {qubit} out of range for {n}-qubit register")
            }
            Error::NotTracePreserving { deviation_milli } => {
                write!(
                    f,
                    "channel is not trace preserving (deviation ~{}e-3)",
                    deviation_milli
                )
            }
            Error::NotTwoDesign { frame_potential_milli } => {
                write!(
                    f,
                    "catalog is not an orthogonal 2-design (frame potential ~{}e-3)",
                    frame_potential_milli
                )
            }
            Error::FitNonConvergence { iterations } => {
                write!(f, "fit failed to converge within {iterations} iterations")
            }
            Error::DegenerateFitData => write!(f, "fit data is degenerate (no decay signal)"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} data points, got {got}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::CatalogParse(msg) => write!(f, "catalog parse error: {msg}"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
