use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid literal `{literal}`: {reason}")]
    Literal { literal: String, reason: String },

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("level {level} exceeds the instance level cap {cap}")]
    UnsupportedLevel { level: usize, cap: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("the identity has no escape witness")]
    IdentityInput,

    #[error("derived witness construction gave up after {0} retries")]
    RetryExhausted(usize),

    #[error("invalid instance parameters: {0}")]
    InvalidParams(String),

    #[error("incompatible levelwise homomorphism: {0}")]
    IncompatibleHom(String),

    #[error("homomorphism target does not embed into matrix entries")]
    NoMatrixEmbedding,
}

impl Error {
    pub(crate) fn literal(literal: &str, reason: impl Into<String>) -> Self {
        Error::Literal {
            literal: literal.to_string(),
            reason: reason.into(),
        }
    }
}
