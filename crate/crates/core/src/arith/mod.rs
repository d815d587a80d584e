//! Arithmetic inside temporal models: the sentence μ forcing a copy of the
//! natural numbers, its finite-window variant, the window witness models and
//! the relativisation check.

mod window;

pub use window::{
    build_window_model, check_translation, e_times, eval_arith, extract_uq, Disagreement, QSubstructure, Samples,
    TranslationChecker, TranslationReport, WindowModel,
};

use thiserror::Error;

use crate::model::ModelError;
use crate::syntax::{parse_formula, Formula, Sentence, Signature, SyntaxError, Term};

/// The guard predicate used by relativisation.
pub const GUARD: &str = "q";

/// `{0, succ, +, *}`.
pub fn la_signature() -> Signature {
    Signature::new()
        .with_constant("0")
        .with_function("succ", 1)
        .with_function("+", 2)
        .with_function("*", 2)
}

/// `{0, succ, +, *}` extended with `e`, `q` and `prec`.
pub fn arith_signature() -> Signature {
    la_signature()
        .with_predicate("e", 1)
        .with_predicate("q", 1)
        .with_predicate("prec", 2)
}

const MU: [&str; 11] = [
    "forall x. dia (e(x) & G ~e(x) & H ~e(x))",
    "box forall x. forall y. (e(x) & e(y) -> x = y)",
    "box forall x. forall y. (prec(x, y) <-> dia (e(x) & F e(y)))",
    "box forall x. (q(x) -> box q(x))",
    "box (q(0) & forall y. (prec(y, 0) -> ~q(y)))",
    "box forall x. (q(x) -> prec(x, succ(x)) & q(succ(x)) & forall z. (prec(x, z) & prec(z, succ(x)) -> ~q(z)))",
    "box forall x. forall y. (q(x) & q(y) -> q(x + y) & q(x * y))",
    "box forall x. (q(x) -> x + 0 = x)",
    "box forall x. forall y. (q(x) & q(y) -> x + succ(y) = succ(x + y))",
    "box forall x. (q(x) -> x * 0 = 0)",
    "box forall x. forall y. (q(x) & q(y) -> x * succ(y) = x * y + x)",
];

/// Conjunct (vi) with its antecedent strengthened so the top of a finite
/// window is exempt.
const MU_VI_BOUNDED: &str = "box forall x. (q(x) & (exists z. prec(x, z) & q(z)) -> prec(x, succ(x)) & q(succ(x)) & forall z. (prec(x, z) & prec(z, succ(x)) -> ~q(z)))";

fn parse_all(texts: impl IntoIterator<Item = &'static str>) -> Vec<Formula> {
    let sig = arith_signature();
    texts
        .into_iter()
        .map(|t| parse_formula(t, &sig).expect("built-in sentence parses"))
        .collect()
}

/// The eleven conjuncts (i)–(xi) of μ, in order.
pub fn mu_conjuncts() -> Vec<Formula> {
    parse_all(MU)
}

/// The conjuncts of μ_N: μ with conjunct (vi) guarded by `∃z(x ≺ z ∧ q(z))`.
pub fn mu_bounded_conjuncts() -> Vec<Formula> {
    let mut texts = MU;
    texts[5] = MU_VI_BOUNDED;
    parse_all(texts)
}

pub fn mu() -> Sentence {
    Sentence::new(Formula::conjunction(mu_conjuncts()).unwrap()).expect("μ is closed")
}

pub fn mu_bounded() -> Sentence {
    Sentence::new(Formula::conjunction(mu_bounded_conjuncts()).unwrap()).expect("μ_N is closed")
}

/// Checks that `φ` is a formula of pure arithmetic: identities between
/// `{0, succ, +, *}`-terms under Boolean connectives and quantifiers.
pub fn check_arithmetic(phi: &Formula) -> Result<(), SyntaxError> {
    fn term_ok(t: &Term, la: &Signature) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) if la.constants.contains(c) => Ok(()),
            Term::App(f, args) if la.functions.get(f) == Some(&args.len()) => {
                args.iter().try_for_each(|a| term_ok(a, la))
            }
            other => Err(SyntaxError::NotArithmetic(format!("term `{other}`"))),
        }
    }
    let la = la_signature();
    for sub in phi.subformulas() {
        match sub {
            Formula::Pred(p, _) => {
                return Err(SyntaxError::NotArithmetic(format!("predicate `{p}`")))
            }
            Formula::G(_)
            | Formula::H(_)
            | Formula::F(_)
            | Formula::P(_)
            | Formula::Always(_)
            | Formula::Sometime(_) => {
                return Err(SyntaxError::NotArithmetic("temporal operator".into()))
            }
            Formula::Eq(l, r) => {
                term_ok(l, &la)?;
                term_ok(r, &la)?;
            }
            _ => {}
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model lacks `{0}`")]
    MissingSymbol(String),
    #[error("q is not rigid at element `{0}`")]
    NonRigid(String),
    #[error("the q-part is not closed under `{0}`")]
    NotClosed(String),
    #[error("variable `{0}` is not assigned an element of the q-part")]
    OutsideCarrier(String),
    #[error("element `{0}` does not satisfy e at exactly one time")]
    NoUniqueETime(String),
    #[error("window size must be at least 1")]
    EmptyWindow,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_infer;

    #[test]
    fn mu_has_eleven_closed_conjuncts() {
        let mu = mu();
        assert_eq!(mu.formula().conjuncts().len(), 11);
        assert!(mu.formula().free_vars().is_empty());
        assert_eq!(mu_bounded().formula().conjuncts().len(), 11);
        let differing: Vec<usize> = mu_conjuncts()
            .iter()
            .zip(mu_bounded_conjuncts())
            .enumerate()
            .filter(|(_, (a, b))| **a != *b)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(differing, vec![5]);
    }

    #[test]
    fn conjunct_shapes() {
        let c = mu_conjuncts();
        let v = Formula::pred("q", vec![Term::zero()])
            .and(Formula::forall(
                "y",
                Formula::pred("prec", vec![Term::var("y"), Term::zero()])
                    .implies(Formula::pred("q", vec![Term::var("y")]).not()),
            ))
            .always();
        assert_eq!(c[4], v);
        let body = Formula::pred("e", vec![Term::var("x")])
            .and(Formula::pred("e", vec![Term::var("x")]).not().g())
            .and(Formula::pred("e", vec![Term::var("x")]).not().h());
        assert_eq!(c[0], Formula::forall("x", body.sometime()));
        assert_eq!(
            c[10].to_string(),
            "box forall x. forall y. q(x) & q(y) -> x * succ(y) = x * y + x"
        );
    }

    #[test]
    fn arithmetic_check() {
        let f = |s: &str| parse_formula_infer(s, &[]).unwrap().0;
        assert!(check_arithmetic(&f("forall x. x + 0 = x")).is_ok());
        assert!(check_arithmetic(&f("forall x. prec(x, x)")).is_err());
        assert!(check_arithmetic(&f("G 0 = 0")).is_err());
        assert!(check_arithmetic(&f("g(0) = 0")).is_err());
    }

    #[test]
    fn relativisation_guards_each_quantifier() {
        let f = parse_formula_infer("forall x. x + 0 = x", &[]).unwrap().0;
        let r = f.relativize(GUARD).unwrap();
        assert_eq!(r.to_string(), "forall x. q(x) -> x + 0 = x");
    }
}
