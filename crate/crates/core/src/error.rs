use thiserror::Error;

/// Errors raised by the arithmetic and the module-structure engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (zero element,
    /// fractional ideal where an integral one is required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured resource bound was exceeded.
    #[error("resource bound exceeded: {what} is {value}, bound is {bound}")]
    Resource {
        what: String,
        value: String,
        bound: String,
    },

    /// The radicand is a p-th power, so the extension collapses.
    #[error("degenerate extension: {0}")]
    Degenerate(String),

    /// The operation requires a prior normalization or classification step.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is valid mathematics but outside what this library handles.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two values were built over different base fields or radicands.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
