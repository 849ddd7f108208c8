//! Constructions from the hardness reductions, made executable: graph encodings of
//! reachability games, the s-t subgraph counting pipeline, path fixtures with
//! interface classification, and the bipartite encoding that counts independent sets.

pub mod encodings;
pub mod graph;
pub mod interface;
pub mod st;

use crate::game::OracleError;
use crate::kb::KbError;
use crate::linalg::LinalgError;
use crate::shapley::ShapleyError;
use crate::supports::SupportError;
use crate::text::TextError;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LabError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("{what}: {n} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid fixture: {0}")]
    Fixture(String),
    #[error("{what} = {value} is not a nonnegative integer")]
    NonInteger { what: String, value: Rational },
    #[error(transparent)]
    Shapley(#[from] ShapleyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Text(#[from] TextError),
}
