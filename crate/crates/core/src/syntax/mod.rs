//! Terms, formulas, signatures, substitution and the concrete grammar.

mod formula;
mod parse;
mod print;
mod signature;
mod term;

pub use formula::Formula;
pub use parse::{
    is_keyword, parse_formula, parse_formula_infer, parse_formula_with, parse_term,
    parse_term_with,
};
pub use print::{print_formula, print_term};
pub use signature::{Signature, SymbolKind};
pub use term::Term;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("at offset {pos}: {source}")]
    At {
        pos: usize,
        #[source]
        source: Box<SyntaxError>,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("name `{0}` is used for two different kinds of symbol")]
    SymbolClash(String),
    #[error("term `{term}` is not free for `{var}`")]
    Capture { var: String, term: String },
    #[error("formula is not atomic")]
    NotAtomic,
    #[error("occurrence {index} selected but the term occurs {occurrences} time(s)")]
    MaskOutOfRange { index: usize, occurrences: usize },
    #[error("free variable `{0}` is not covered by the assignment")]
    UncoveredVariable(String),
    #[error("not a formula of arithmetic: {0}")]
    NotArithmetic(String),
    #[error("formula has free variables: {0:?}")]
    NotASentence(Vec<String>),
}

impl SyntaxError {
    pub fn position(&self) -> Option<usize> {
        match self {
            SyntaxError::Parse { pos, .. } | SyntaxError::At { pos, .. } => Some(*pos),
            _ => None,
        }
    }

    /// The underlying error with position wrappers removed.
    pub fn root(&self) -> &SyntaxError {
        match self {
            SyntaxError::At { source, .. } => source.root(),
            other => other,
        }
    }
}

/// A formula without free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Self, SyntaxError> {
        let free = formula.free_vars();
        if free.is_empty() {
            Ok(Sentence(formula))
        } else {
            Err(SyntaxError::NotASentence(free.into_iter().collect()))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl TryFrom<Formula> for Sentence {
    type Error = SyntaxError;

    fn try_from(f: Formula) -> Result<Self, Self::Error> {
        Sentence::new(f)
    }
}

impl AsRef<Formula> for Sentence {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

impl std::fmt::Display for Sentence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
