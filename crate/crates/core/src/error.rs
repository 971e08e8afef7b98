use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The document is not well-formed for the expected schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// The document is well-formed but refers to things that do not exist,
    /// or breaks a structural invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown builtin family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("too large: {what} is {actual}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("not an element of the lattice: {0}")]
    NotAnElement(String),

    #[error("presentation has no tensor structure")]
    NoTensor,

    /// The universal map sent a point to a set that is not thick.
    #[error("point `{point}` maps to a set that is not thick")]
    NotThick { point: String },

    #[error("support of `{indec}` is not closed in the source space")]
    NotContinuous { indec: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
