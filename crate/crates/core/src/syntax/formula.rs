use std::collections::{BTreeMap, BTreeSet};

use super::{SyntaxError, Term};

/// Formulas of first-order temporal logic.
///
/// The core connectives are `Pred`, `Eq`, `Not`, `And`, `G`, `H` and `Forall`.
/// The remaining variants are sugar; [`Formula::normalize`] rewrites them into
/// the core.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    G(Box<Formula>),
    H(Box<Formula>),
    Forall(String, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    F(Box<Formula>),
    P(Box<Formula>),
    /// `box φ`, i.e. `H φ & φ & G φ`.
    Always(Box<Formula>),
    /// `dia φ`, i.e. `P φ | φ | F φ`.
    Sometime(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Pred(name.into(), args)
    }

    /// A nullary predicate `p()`.
    pub fn atom(name: impl Into<String>) -> Self {
        Pred(name.into(), Vec::new())
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Eq(lhs, rhs)
    }

    pub fn not(self) -> Self {
        Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Self {
        Iff(Box::new(self), Box::new(rhs))
    }

    pub fn g(self) -> Self {
        G(Box::new(self))
    }

    pub fn h(self) -> Self {
        H(Box::new(self))
    }

    pub fn f(self) -> Self {
        F(Box::new(self))
    }

    pub fn p(self) -> Self {
        P(Box::new(self))
    }

    pub fn always(self) -> Self {
        Always(Box::new(self))
    }

    pub fn sometime(self) -> Self {
        Sometime(Box::new(self))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Exists(var.into(), Box::new(body))
    }

    /// Left-nested conjunction of `parts`; `None` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Right-nested conjunction `a & (b & (c & ...))`.
    pub fn right_conjunction(parts: &[Formula]) -> Option<Formula> {
        let (last, init) = parts.split_last()?;
        Some(
            init.iter()
                .rev()
                .fold(last.clone(), |acc, f| f.clone().and(acc)),
        )
    }

    /// Top-level conjuncts of a left-nested conjunction.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            And(a, b) => {
                let mut out = a.conjuncts();
                out.push(b);
                out
            }
            _ => vec![self],
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Pred(..) | Eq(..))
    }

    /// True when no sugar node occurs.
    pub fn is_core(&self) -> bool {
        match self {
            Pred(..) | Eq(..) => true,
            Not(a) | G(a) | H(a) | Forall(_, a) => a.is_core(),
            And(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    pub(crate) fn children(&self) -> Vec<&Formula> {
        match self {
            Pred(..) | Eq(..) => vec![],
            Not(a) | G(a) | H(a) | F(a) | P(a) | Always(a) | Sometime(a) | Forall(_, a)
            | Exists(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
        }
    }

    /// Rebuild this node with its immediate subformulas mapped by `f`.
    pub(crate) fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        let b = |x: Formula| Box::new(x);
        match self {
            Pred(..) | Eq(..) => self.clone(),
            Not(a) => Not(b(f(a))),
            G(a) => G(b(f(a))),
            H(a) => H(b(f(a))),
            F(a) => F(b(f(a))),
            P(a) => P(b(f(a))),
            Always(a) => Always(b(f(a))),
            Sometime(a) => Sometime(b(f(a))),
            Forall(x, a) => Forall(x.clone(), b(f(a))),
            Exists(x, a) => Exists(x.clone(), b(f(a))),
            And(l, r) => And(b(f(l)), b(f(r))),
            Or(l, r) => Or(b(f(l)), b(f(r))),
            Implies(l, r) => Implies(b(f(l)), b(f(r))),
            Iff(l, r) => Iff(b(f(l)), b(f(r))),
        }
    }

    pub fn bound_var(&self) -> Option<&str> {
        match self {
            Forall(x, _) | Exists(x, _) => Some(x),
            _ => None,
        }
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Pred(_, ts) => {
                for t in ts {
                    for v in t.vars() {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v);
                        }
                    }
                }
            }
            Eq(l, r) => {
                for v in l.vars().into_iter().chain(r.vars()) {
                    if !bound.contains(&v.as_str()) {
                        out.insert(v);
                    }
                }
            }
            Forall(x, a) | Exists(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_free(&self, var: &str) -> bool {
        match self {
            Pred(_, ts) => ts.iter().any(|t| t.has_var(var)),
            Eq(l, r) => l.has_var(var) || r.has_var(var),
            Forall(x, a) | Exists(x, a) => x != var && a.is_free(var),
            _ => self.children().iter().any(|c| c.is_free(var)),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// `τ` is free for `x` in `self`: no free occurrence of `x` lies in the
    /// scope of a quantifier binding a variable of `τ`.
    pub fn free_for(&self, term: &Term, var: &str) -> bool {
        let term_vars = term.vars();
        self.free_for_inner(&term_vars, var, false)
    }

    fn free_for_inner(&self, term_vars: &BTreeSet<String>, var: &str, captured: bool) -> bool {
        match self {
            Pred(..) | Eq(..) => !(captured && self.is_free(var)),
            Forall(x, a) | Exists(x, a) => {
                if x == var {
                    true
                } else {
                    a.free_for_inner(term_vars, var, captured || term_vars.contains(x))
                }
            }
            _ => self
                .children()
                .iter()
                .all(|c| c.free_for_inner(term_vars, var, captured)),
        }
    }

    /// `φ(τ/x)`: replace all free occurrences of `var` by `term`.
    ///
    /// No alpha-renaming is done; a capture is an error.
    pub fn substitute(&self, var: &str, term: &Term) -> Result<Formula, SyntaxError> {
        if !self.free_for(term, var) {
            return Err(SyntaxError::Capture {
                var: var.to_string(),
                term: super::print_term(term),
            });
        }
        Ok(self.substitute_unchecked(var, term))
    }

    pub(crate) fn substitute_unchecked(&self, var: &str, term: &Term) -> Formula {
        match self {
            Pred(p, ts) => Pred(p.clone(), ts.iter().map(|t| t.substitute(var, term)).collect()),
            Eq(l, r) => Eq(l.substitute(var, term), r.substitute(var, term)),
            Forall(x, _) | Exists(x, _) if x == var => self.clone(),
            _ => self.map_children(|c| c.substitute_unchecked(var, term)),
        }
    }

    /// `φ(τ'∥τ)` for atomic `φ`: replace exactly the occurrences of `from`
    /// whose preorder indices are listed in `mask`.
    pub fn partial_replace(
        &self,
        from: &Term,
        to: &Term,
        mask: &BTreeSet<usize>,
    ) -> Result<Formula, SyntaxError> {
        if !self.is_atomic() {
            return Err(SyntaxError::NotAtomic);
        }
        let count: usize = match self {
            Pred(_, ts) => ts.iter().map(|t| t.count_occurrences(from)).sum(),
            Eq(l, r) => l.count_occurrences(from) + r.count_occurrences(from),
            _ => unreachable!(),
        };
        if let Some(&bad) = mask.iter().find(|&&i| i >= count) {
            return Err(SyntaxError::MaskOutOfRange {
                index: bad,
                occurrences: count,
            });
        }
        let selected = |i: usize| mask.contains(&i);
        let mut counter = 0;
        Ok(match self {
            Pred(p, ts) => Pred(
                p.clone(),
                ts.iter()
                    .map(|t| t.replace_occurrences(from, to, &selected, &mut counter))
                    .collect(),
            ),
            Eq(l, r) => {
                let l = l.replace_occurrences(from, to, &selected, &mut counter);
                let r = r.replace_occurrences(from, to, &selected, &mut counter);
                Eq(l, r)
            }
            _ => unreachable!(),
        })
    }

    /// Mirror image: swap `G`/`H` and `F`/`P`.
    pub fn mirror(&self) -> Formula {
        match self {
            G(a) => H(Box::new(a.mirror())),
            H(a) => G(Box::new(a.mirror())),
            F(a) => P(Box::new(a.mirror())),
            P(a) => F(Box::new(a.mirror())),
            _ => self.map_children(Formula::mirror),
        }
    }

    /// Expand all sugar into the core connectives.
    pub fn normalize(&self) -> Formula {
        match self {
            Pred(..) | Eq(..) => self.clone(),
            Not(a) => a.normalize().not(),
            G(a) => a.normalize().g(),
            H(a) => a.normalize().h(),
            Forall(x, a) => Formula::forall(x.clone(), a.normalize()),
            And(a, b) => a.normalize().and(b.normalize()),
            Or(a, b) => core_or(a.normalize(), b.normalize()),
            Implies(a, b) => core_implies(a.normalize(), b.normalize()),
            Iff(a, b) => {
                let (a, b) = (a.normalize(), b.normalize());
                core_implies(a.clone(), b.clone()).and(core_implies(b, a))
            }
            Exists(x, a) => Formula::forall(x.clone(), a.normalize().not()).not(),
            F(a) => a.normalize().not().g().not(),
            P(a) => a.normalize().not().h().not(),
            Always(a) => {
                let a = a.normalize();
                a.clone().h().and(a.clone()).and(a.g())
            }
            Sometime(a) => {
                let a = a.normalize();
                let past = a.clone().not().h().not();
                let fut = a.clone().not().g().not();
                core_or(core_or(past, a), fut)
            }
        }
    }

    /// `φ^f`: replace each free variable by the constant named by `assignment`.
    pub fn apply_assignment(
        &self,
        assignment: &BTreeMap<String, String>,
    ) -> Result<Formula, SyntaxError> {
        let mut out = self.clone();
        for v in self.free_vars() {
            let c = assignment
                .get(&v)
                .ok_or_else(|| SyntaxError::UncoveredVariable(v.clone()))?;
            out = out.substitute_unchecked(&v, &Term::Const(c.clone()));
        }
        Ok(out)
    }

    /// True when a temporal operator occurs.
    pub fn is_temporal(&self) -> bool {
        match self {
            G(_) | H(_) | F(_) | P(_) | Always(_) | Sometime(_) => true,
            _ => self.children().iter().any(|c| c.is_temporal()),
        }
    }

    /// `φ_q`: relativize every quantifier to the predicate `q`.
    ///
    /// Defined for formulas of pure arithmetic (identities, Boolean
    /// connectives and quantifiers).
    pub fn relativize(&self, guard: &str) -> Result<Formula, SyntaxError> {
        match self {
            Eq(..) => Ok(self.clone()),
            Pred(p, _) => Err(SyntaxError::NotArithmetic(format!("predicate `{p}`"))),
            G(_) | H(_) | F(_) | P(_) | Always(_) | Sometime(_) => Err(
                SyntaxError::NotArithmetic("temporal operator".to_string()),
            ),
            Forall(x, a) => Ok(Formula::forall(
                x.clone(),
                Formula::pred(guard, vec![Term::var(x.clone())]).implies(a.relativize(guard)?),
            )),
            // ∃x φ abbreviates ¬∀x¬φ
            Exists(x, a) => Ok(Formula::forall(
                x.clone(),
                Formula::pred(guard, vec![Term::var(x.clone())])
                    .implies(a.relativize(guard)?.not()),
            )
            .not()),
            _ => {
                let mut err = None;
                let out = self.map_children(|c| match c.relativize(guard) {
                    Ok(f) => f,
                    Err(e) => {
                        err.get_or_insert(e);
                        c.clone()
                    }
                });
                match err {
                    Some(e) => Err(e),
                    None => Ok(out),
                }
            }
        }
    }

    /// All subformulas, including `self`, in preorder.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.subformulas());
        }
        out
    }

    /// Nesting depth of connectives, modalities and quantifiers.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Number of nested quantifiers along the deepest branch.
    pub fn quantifier_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.quantifier_depth())
            .max()
            .unwrap_or(0);
        inner + usize::from(self.bound_var().is_some())
    }

    pub fn count_nodes(&self, pred: &dyn Fn(&Formula) -> bool) -> usize {
        self.subformulas().into_iter().filter(|f| pred(f)).count()
    }

    /// All terms occurring in atoms.
    pub fn terms(&self) -> Vec<&Term> {
        self.subformulas()
            .into_iter()
            .flat_map(|f| match f {
                Pred(_, ts) => ts.iter().collect::<Vec<_>>(),
                Eq(l, r) => vec![l, r],
                _ => vec![],
            })
            .collect()
    }
}

fn core_or(a: Formula, b: Formula) -> Formula {
    a.not().and(b.not()).not()
}

fn core_implies(a: Formula, b: Formula) -> Formula {
    a.and(b.not()).not()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: &[&str]) -> Formula {
        Formula::pred("p", args.iter().map(|a| Term::var(*a)).collect())
    }

    fn q(arg: Term) -> Formula {
        Formula::pred("q", vec![arg])
    }

    #[test]
    fn free_vars_respect_binding() {
        let f = Formula::forall("x", p(&["x", "y"]));
        assert_eq!(f.free_vars(), ["y".to_string()].into());
        let g = p(&["x"]).and(Formula::forall("x", q(Term::var("x"))));
        assert_eq!(g.free_vars(), ["x".to_string()].into());
    }

    #[test]
    fn substitution_leaves_bound_occurrences() {
        let c = Term::constant("c");
        let f = Formula::forall("y", p(&["x", "y"]));
        let expected = Formula::forall(
            "y",
            Formula::pred("p", vec![c.clone(), Term::var("y")]),
        );
        assert_eq!(f.substitute("x", &c).unwrap(), expected);

        let g = p(&["x"]).and(Formula::forall("x", q(Term::var("x"))));
        let expected = Formula::pred("p", vec![c.clone()]).and(Formula::forall("x", q(Term::var("x"))));
        assert_eq!(g.substitute("x", &c).unwrap(), expected);
    }

    #[test]
    fn capture_is_an_error() {
        let f = Formula::forall("y", p(&["x", "y"]));
        assert!(!f.free_for(&Term::var("y"), "x"));
        assert!(f.free_for(&Term::constant("c"), "x"));
        assert!(f.free_for(&Term::var("x"), "x"));
        assert!(matches!(
            f.substitute("x", &Term::var("y")),
            Err(SyntaxError::Capture { .. })
        ));
    }

    #[test]
    fn capture_detected_under_exists_and_modalities() {
        let f = Formula::exists("y", p(&["x", "y"]).g());
        assert!(!f.free_for(&Term::app("f", vec![Term::var("y")]), "x"));
        // x is bound below ∀x, so nothing is substituted there
        let g = Formula::forall("y", Formula::forall("x", p(&["x", "y"])));
        assert!(g.free_for(&Term::var("y"), "x"));
    }

    #[test]
    fn partial_replacement_follows_mask() {
        let c = Term::constant("c");
        let d = Term::constant("d");
        let f = Formula::pred("p", vec![c.clone(), c.clone()]);
        let out = f.partial_replace(&c, &d, &[0].into()).unwrap();
        assert_eq!(out, Formula::pred("p", vec![d.clone(), c.clone()]));

        let e = Formula::eq(c.clone(), c.clone());
        let out = e.partial_replace(&c, &d, &[1].into()).unwrap();
        assert_eq!(out, Formula::eq(c.clone(), d.clone()));

        let g = Formula::pred("p", vec![c.clone()]).g();
        assert_eq!(g.partial_replace(&c, &d, &[0].into()), Err(SyntaxError::NotAtomic));
        assert!(matches!(
            f.partial_replace(&c, &d, &[2].into()),
            Err(SyntaxError::MaskOutOfRange { index: 2, occurrences: 2 })
        ));
    }

    #[test]
    fn nested_occurrences_are_counted_in_preorder() {
        let c = Term::constant("c");
        let d = Term::constant("d");
        let fc = Term::app("f", vec![c.clone()]);
        let f = Formula::pred("p", vec![fc, c.clone()]);
        let out = f.partial_replace(&c, &d, &[1].into()).unwrap();
        assert_eq!(
            out,
            Formula::pred("p", vec![Term::app("f", vec![c.clone()]), d])
        );
    }

    #[test]
    fn mirror_swaps_temporal_operators() {
        let a = Formula::atom("p");
        assert_eq!(a.clone().g().mirror(), a.clone().h());
        let gp = a.clone().implies(a.clone().p().g());
        assert_eq!(gp.mirror(), a.clone().implies(a.clone().f().h()));
        assert_eq!(a.clone().always().mirror(), a.clone().always());
    }

    #[test]
    fn normalization_expands_box_and_dia() {
        let a = Formula::atom("p");
        let boxed = a.clone().always().normalize();
        assert_eq!(boxed, a.clone().h().and(a.clone()).and(a.clone().g()));
        let dia = a.clone().sometime().normalize();
        assert!(dia.is_core());
        assert_eq!(a.clone().f().normalize(), a.clone().not().g().not());
    }

    #[test]
    fn assignment_closes_formula() {
        let f = p(&["x", "y"]);
        let map: BTreeMap<_, _> = [("x".to_string(), "a".to_string()), ("y".to_string(), "b".to_string())].into();
        let out = f.apply_assignment(&map).unwrap();
        assert!(out.is_sentence());
        assert_eq!(
            out,
            Formula::pred("p", vec![Term::constant("a"), Term::constant("b")])
        );
        let g = p(&["x"]).and(Formula::forall("x", q(Term::var("x"))));
        let out = g.apply_assignment(&map).unwrap();
        assert_eq!(
            out,
            Formula::pred("p", vec![Term::constant("a")]).and(Formula::forall("x", q(Term::var("x"))))
        );
        assert_eq!(
            f.apply_assignment(&BTreeMap::new()),
            Err(SyntaxError::UncoveredVariable("x".into()))
        );
    }

    #[test]
    fn relativization_guards_quantifiers() {
        let x = Term::var("x");
        let f = Formula::forall("x", Formula::eq(x.clone().plus(Term::zero()), x.clone()));
        let expected = Formula::forall(
            "x",
            Formula::pred("q", vec![x.clone()])
                .implies(Formula::eq(x.clone().plus(Term::zero()), x.clone())),
        );
        assert_eq!(f.relativize("q").unwrap(), expected);
        let atom = Formula::eq(Term::zero(), Term::zero());
        assert_eq!(atom.relativize("q").unwrap(), atom);
        assert_eq!(f.clone().not().relativize("q").unwrap(), expected.not());
        assert!(atom.g().relativize("q").is_err());
    }
}
