//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into *user errors* (bad input, malformed JSON, membership
/// failures of supplied diagrams, windows that are too small) and
/// *property violations* (an internal audit failed, which signals an
/// implementation bug).  [`Error::is_property_violation`] tells them apart;
/// the command-line front end maps them to exit codes 1 and 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Unsupported characteristic.
    #[error("invalid field: {0}")]
    InvalidField(String),
    /// Two objects live over different coefficient fields.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    /// The order relation is not a partial order, or labels repeat.
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    /// An object label does not exist in the poset.
    #[error("unknown object label {0}")]
    UnknownObject(String),
    /// A map does not preserve the order or does not match its poset.
    #[error("invalid monotone map: {0}")]
    InvalidMap(String),
    /// Parameters of a named shape or connector are out of range.
    #[error("invalid shape parameters: {0}")]
    InvalidShape(String),
    /// Diagrams or maps over different shapes were combined.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A matrix has the wrong size, or `d∘d ≠ 0`.
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    /// A family of matrices does not commute with the differentials.
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
    /// Two composites of covering arrows disagree.
    #[error("diagram is not strictly commutative: {0}")]
    NotStrict(String),
    /// Four objects do not form a commutative square in the shape.
    #[error("invalid square: {0}")]
    InvalidSquare(String),
    /// A mesh-valued map or construction leaves the materialized window.
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    /// A supplied diagram is not a member of the required subderivator.
    #[error("membership failure: {0}")]
    Membership(String),
    /// Malformed JSON document.
    #[error("schema error: {0}")]
    Schema(String),
    /// Input/output failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// An internal audit failed: this is an implementation bug.
    #[error("property violation: {0}")]
    PropertyViolation(String),
}

impl Error {
    /// `true` for audit failures that indicate a bug rather than bad input.
    pub fn is_property_violation(&self) -> bool {
        matches!(self, Error::PropertyViolation(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(format!("line {}, column {}: {}", e.line(), e.column(), e))
    }
}

/// Result alias.
pub type Result<T> = std::result::Result<T, Error>;
