use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by site computations.
///
/// Everything here is a caller error or a resource cap; the mathematical
/// checkers themselves never error, they return verdicts with evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix or vector shapes do not line up.
    DimensionMismatch { context: &'static str, expected: usize, got: usize },
    /// Two values live over different ground fields.
    FieldMismatch { context: &'static str },
    /// Two sieves target different objects.
    TargetMismatch { context: &'static str },
    /// An object name did not resolve in its category.
    UnknownObject { name: String },
    /// An exhaustive enumeration would exceed the configured cap.
    CapExceeded { what: &'static str, cap: u64, requested: u64 },
    /// The operation requires a prime field (exhaustive quantifiers are
    /// finite only over `F_p`).
    UnsupportedField { op: &'static str },
    /// Two windowed Z-algebras have different windows.
    WindowMismatch { left: (i64, i64), right: (i64, i64) },
    /// A window is taller than the degree bound of the graded algebra.
    WindowTooTall { height: usize, bound: usize },
    /// A monomial relation lies outside the algebra's degree range.
    RelationOutOfRange { degree: usize, bound: usize },
    /// A stated precondition of the operation does not hold.
    Precondition { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { context, expected, got } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, got {got}")
            }
            Error::FieldMismatch { context } => write!(f, "field mismatch in {context}"),
            Error::TargetMismatch { context } => write!(f, "sieve target mismatch in {context}"),
            Error::UnknownObject { name } => write!(f, "unknown object `{name}`"),
            Error::CapExceeded { what, cap, requested } => {
                write!(f, "enumeration cap exceeded for {what}: cap {cap}, requested {requested}")
            }
            Error::UnsupportedField { op } => {
                write!(f, "{op} requires a prime field; the rationals are not enumerable")
            }
            Error::WindowMismatch { left, right } => {
                write!(f, "window mismatch: [{},{}] vs [{},{}]", left.0, left.1, right.0, right.1)
            }
            Error::WindowTooTall { height, bound } => {
                write!(f, "window height {height} exceeds degree bound {bound}")
            }
            Error::RelationOutOfRange { degree, bound } => {
                write!(f, "relation of degree {degree} outside degree bound {bound}")
            }
            Error::Precondition { what } => write!(f, "precondition failed: {what}"),
        }
    }
}

impl std::error::Error for Error {}
