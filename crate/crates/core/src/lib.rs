//! First-order temporal logic with `G` and `H` under admissible semantics:
//! syntax, a Hilbert-style proof checker, a finite model evaluator with
//! countermodel search, the arithmetic encoding into temporal models, and the
//! order embedding of a nonstandard order type into the rationals.

pub mod arith;
pub mod embed;
pub mod kernel;
pub mod model;
pub mod random;
pub mod syntax;

pub use embed::{GalaxyIndex, NsElement};
pub use kernel::{check_proof, Axiom, Logic, ProofScript, Verdict};
pub use model::{Structure, TruthSet};
pub use syntax::{parse_formula, print_formula, Formula, Sentence, Signature, Term};

/// Exact rationals, the default scalar for embedding values.
pub type Rational = num_rational::BigRational;

/// `θ` with exact rational values.
pub type Theta = embed::ThetaEmbedding<Rational>;

/// `θ` with floating-point values.
pub type ThetaF64 = embed::ThetaEmbedding<f64>;
