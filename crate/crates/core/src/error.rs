use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(String),
    #[error("value out of supported range: {0}")]
    Range(String),
    #[error("malformed literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("no closed-form exception set tabulated for ({0},{1},{2})")]
    UntabulatedTriple(i64, i64, i64),
    #[error("discriminant {disc} exceeds the enumeration bound {bound}")]
    BoundExceeded { disc: i64, bound: i64 },
    #[error("empty class list")]
    EmptyClassList,
    #[error("{what}: precursor {value} has no representation by the precursor form")]
    PrecursorUnrepresentable { what: String, value: i64 },
    #[error("normalization failed in {0}")]
    NormalizationFailed(String),
    #[error("no representation found for {0}")]
    NotFound(i64),
    #[error("{0} is not a theorem variant")]
    NotATheoremVariant(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn parse(literal: &str, reason: impl Into<String>) -> Self {
        Error::Parse { literal: literal.to_string(), reason: reason.into() }
    }
}
