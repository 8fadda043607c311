use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("t = {t} lies outside the domain [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    #[error("jet order {requested} requested but the trajectory provides at most {available}")]
    OrderUnavailable { requested: usize, available: usize },

    #[error("unknown catalog trajectory `{0}`")]
    UnknownCatalog(String),

    #[error("catalog trajectory `{name}` takes {expected} parameter(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("interval requires a < b (got a = {a}, b = {b})")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value while evaluating the trajectory at t = {t}")]
    NonFinite { t: f64 },

    #[error("adaptive quadrature did not converge (best estimate {estimate}, error estimate {error})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}
