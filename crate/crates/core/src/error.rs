use thiserror::Error;

/// Errors raised by the library.
///
/// Validation failures of a structurally sound state are *not* errors; they
/// are reported through [`crate::xstate::ValidationReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shape problems: wrong vector lengths, bad qubit counts, bad indices.
    #[error("structural error: {0}")]
    Structural(String),

    /// A size guard was exceeded (dense cap, compact cap).
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An argument lies outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The state does not satisfy the density-matrix conditions.
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
