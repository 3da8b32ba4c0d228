use thiserror::Error;

/// Failure modes shared by every computation in the crate.
///
/// The CLI maps these onto its exit codes: input and precondition
/// errors exit with 2, resource errors with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong shape, out-of-range index, unparsable file.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input that violates the mathematical precondition of
    /// the requested operation.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A configured budget (matrix memory, closure size, bit size,
    /// enumeration size, degree) would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
