use core::fmt;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument lies outside the function's domain.
    Domain { what: &'static str, value: f64 },
    /// An iterative method exhausted its iteration budget.
    Convergence {
        what: &'static str,
        iterations: usize,
    },
    /// Interaction effects violate the zero row/column sum side conditions.
    SideCondition {
        axis: &'static str,
        index: usize,
        sum: f64,
    },
    /// The problem has no unique answer (e.g. a zero effect in a length minimization).
    Degenerate(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    pub(crate) fn convergence(what: &'static str, iterations: usize) -> Self {
        Error::Convergence { what, iterations }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Convergence { what, iterations } => {
                write!(f, "{what} did not converge within {iterations} iterations")
            }
            Error::SideCondition { axis, index, sum } => {
                write!(f, "interaction {axis} {index} sums to {sum}, expected 0")
            }
            Error::Degenerate(msg) => write!(f, "degenerate problem: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
