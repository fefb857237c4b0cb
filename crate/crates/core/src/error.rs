use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime >= 7")]
    InvalidPrime(u64),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("constant {name} does not exist for p = {p}")]
    MissingConstant { name: &'static str, p: u64 },

    #[error("family {family} is not defined for p = {p}: {reason}")]
    InadmissibleFamily {
        family: String,
        p: u64,
        reason: &'static str,
    },

    #[error("unknown family tag {0:?}")]
    UnknownFamily(String),

    #[error("group of order {order} exceeds the search budget of {budget}")]
    OverBudget { order: u64, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("malformed report: {0}")]
    Report(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
