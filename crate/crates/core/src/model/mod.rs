//! Finite time flows, admissible families, structures and their evaluation.

mod eval;
mod family;
mod json;
mod search;
mod set;
mod structure;

pub use eval::{assignments, Assignment};
pub use family::{boolean_closure, close_family, PropFamily};
pub use json::{ModelFile, PropSpec};
pub use search::{
    countermodel_search, countermodel_search_in, element_names, find_model, SearchBounds, SearchMode,
    Witness,
};
pub use set::{TruthSet, MAX_POINTS};
pub use structure::{tuples, Interpretation, Structure, Table, TimeFlow};

use thiserror::Error;

use crate::syntax::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("time flow is empty")]
    EmptyFlow,
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("time flow has {0} points; at most {MAX_POINTS} are supported")]
    TooManyPoints(usize),
    #[error("name `{0}` occurs twice")]
    DuplicateName(String),
    #[error("symbol `{0}` is interpreted twice")]
    SymbolClash(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("symbol `{0}` is not interpreted")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected}, applied to {found} argument(s)")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("malformed interpretation: {0}")]
    BadTable(String),
    #[error("prop is not closed under the Boolean operations, [<] and [>]")]
    PropNotClosed,
    #[error("truth set of {predicate}{tuple:?} is not in prop")]
    NotAdmissible { predicate: String, tuple: Vec<String> },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("invalid model file: {0}")]
    Json(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
