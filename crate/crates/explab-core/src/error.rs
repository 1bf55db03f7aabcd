//! Error type shared by all core modules.

use alloc::string::String;

/// Errors produced by validation and by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input failed a precondition (bad pmf, empty grid, malformed range, ...).
    Invalid(String),
    /// A root bracket does not straddle a sign change.
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// Quadrature refinement stalled; carries the last two estimates.
    QuadratureStall { last: f64, previous: f64 },
    /// The operation is not defined for this constellation kind.
    UnsupportedKind(&'static str),
    /// A closed form was evaluated outside its validity window.
    Validity(String),
    /// The simulation would exceed the configured decode budget.
    BudgetExceeded { required: u64, budget: u64 },
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::NoSignChange { lo, hi, f_lo, f_hi } => write!(
                f,
                "no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
            ),
            Error::QuadratureStall { last, previous } => write!(
                f,
                "quadrature did not converge within the refinement limit \
                 (last two estimates {last} and {previous})"
            ),
            Error::UnsupportedKind(what) => {
                write!(f, "operation not supported for this constellation kind: {what}")
            }
            Error::Validity(msg) => write!(f, "outside validity window: {msg}"),
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "simulation requires {required} decode operations, budget is {budget}"
            ),
        }
    }
}

impl core::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// True when the error stems from input validation rather than a numerical failure.
///
/// Front ends use this to pick an exit status.
impl Error {
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::UnsupportedKind(_) | Error::BudgetExceeded { .. }
        )
    }
}
