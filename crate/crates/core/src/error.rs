use thiserror::Error;

use crate::fincat::{CategoryError, FunctorViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("invalid functor: {}", first(.0))]
    Functor(Vec<FunctorViolation>),
    #[error("search budget of {limit} steps exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("functors are not parallel")]
    NotParallel,
    #[error("invalid distributor: {}", first(.0))]
    Distributor(Vec<String>),
    #[error("distributor chain does not compose: {0}")]
    ChainMismatch(String),
    #[error("no weighted colimit: object `{0}` has no representation")]
    NotFound(String),
    #[error("the downstairs colimit does not exist")]
    DownstairsMissing,
    #[error("invalid relative adjunction: {}", first(.0))]
    Adjunction(Vec<String>),
    #[error("law `{law}` fails at {witness}")]
    LawFail { law: String, witness: String },
    #[error("adjunction does not induce the monad of the algebra category")]
    MonadMismatch,
    #[error("roots do not match: {0}")]
    RootMismatch(String),
    #[error("premise fails: {0}")]
    PremiseFail(String),
    #[error("theorem violated (engine bug): {0}")]
    TheoremViolation(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("validation error in {location}: {message}")]
    Validation { location: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

fn first<T: std::fmt::Display>(v: &[T]) -> String {
    match v {
        [] => "no details".to_string(),
        [x] => x.to_string(),
        [x, rest @ ..] => format!("{x} (and {} more)", rest.len()),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
