use thiserror::Error;

use crate::algebra::Violation;
use crate::duality::PPViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} exceeds the size cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("not a p-algebra: {0}")]
    InvalidAlgebra(Violation),
    #[error("not a partial order: {0}")]
    InvalidPoset(String),
    #[error("algebra is not Boolean: {x} | {x}* != 1")]
    NotBoolean { x: usize },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a pp-morphism: {0}")]
    NotPPMorphism(PPViolation),
    #[error("invalid Boolean pair: {0}")]
    InvalidBooleanPair(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("expected exactly one atom, found {0}")]
    AtomCount(usize),
    #[error("set is not closed under the operations: {0}")]
    NotSubuniverse(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown predicate `{name}` with {arity} argument(s)")]
    UnknownPredicate { name: String, arity: usize },
    #[error("formula is outside the graph fragment: {0}")]
    OutOfFragment(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("algebra is not distributive: duality map is not an isomorphism ({0})")]
    NotDistributive(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn cap(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::CapExceeded {
            what,
            limit,
            actual,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
