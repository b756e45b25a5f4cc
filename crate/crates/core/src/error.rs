use std::fmt;

/// Errors produced by kernel, transform and quadrature evaluations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    Domain(String),
    /// Weight name not in the built-in family.
    UnknownWeight { given: String, valid: &'static [&'static str] },
    /// Symbol name not in the built-in family.
    UnknownSymbol { given: String, valid: &'static [&'static str] },
    /// A quadrature failed to reach the requested tolerance within the node cap.
    NonConvergence { what: String, rel_err: f64, nodes: usize },
    /// Invalid configuration (CLI flags or config file).
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnknownWeight { given, valid } => {
                write!(f, "unknown weight '{given}'; valid names: {}", valid.join(", "))
            }
            Error::UnknownSymbol { given, valid } => {
                write!(f, "unknown symbol '{given}'; valid names: {}", valid.join(", "))
            }
            Error::NonConvergence { what, rel_err, nodes } => write!(
                f,
                "quadrature did not converge: {what} (rel err {rel_err:.3e} after {nodes} nodes)"
            ),
            Error::Config(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
