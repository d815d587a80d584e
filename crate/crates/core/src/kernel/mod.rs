//! Hilbert-style proof checking for the logics L, L_Q and L_R.
//!
//! Every line carries an explicit justification; axiom lines name the scheme
//! and give its metavariables, so checking is purely syntactic. Formulas are
//! compared after expanding abbreviations.

mod axiom;
mod barcan;
mod check;
mod script;

pub use axiom::{
    is_tautology_instance, match_axiom, Axiom, AxiomMatch, FrameClass, InstanceError, Instantiation, Meta,
    MAX_TAUT_ATOMS,
};
pub use barcan::{barcan_body, barcan_g_formula, barcan_g_script, barcan_h_script};
pub use check::{
    check_proof, entails, mirror_proof, Justification, ProofLine, ProofScript, ScriptBuilder, Verdict,
};
pub use script::{LineFile, ScriptFile};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::SyntaxError;

/// The three logics, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Logic {
    L,
    #[serde(rename = "L_Q")]
    LQ,
    #[serde(rename = "L_R")]
    LR,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::L => "L",
            Logic::LQ => "L_Q",
            Logic::LR => "L_R",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("tautology check needs {0} atoms; the limit is {MAX_TAUT_ATOMS}")]
    TooManyAtoms(usize),
    #[error("{axiom} needs metavariable `{name}`")]
    MissingMetavariable { axiom: String, name: String },
    #[error("{axiom} takes no metavariable `{name}`")]
    UnexpectedMetavariable { axiom: String, name: String },
    #[error("entailment is checked on theorems; the script has premises")]
    PremisesInTheoremMode,
    #[error("conjunct `{0}` is not a member of the premise set")]
    NotInDelta(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("bad arguments: {0}")]
    BadArgs(String),
    #[error("line {id}: {source}")]
    Line {
        id: usize,
        #[source]
        source: Box<KernelError>,
    },
    #[error("invalid script file: {0}")]
    Json(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
