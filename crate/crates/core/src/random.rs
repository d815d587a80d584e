//! Seeded generators for formulas, terms, families and structures.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{
    element_names, Interpretation, PropFamily, Structure, Table, TimeFlow, TruthSet,
};
use crate::syntax::{Formula, Signature, Term};

/// Shape parameters for random formulas.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub sig: Signature,
    /// Variables available for terms and quantifiers.
    pub vars: Vec<String>,
    pub depth: usize,
    pub term_depth: usize,
    /// Allow `G`, `H`, and (with `sugar`) `F`, `P`, `box`, `dia`.
    pub temporal: bool,
    pub quantifiers: bool,
    /// Allow derived connectives.
    pub sugar: bool,
}

impl FormulaGen {
    pub fn new(sig: Signature, vars: &[&str]) -> Self {
        FormulaGen {
            sig,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            depth: 3,
            term_depth: 1,
            temporal: true,
            quantifiers: true,
            sugar: true,
        }
    }

    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Term {
        let consts: Vec<&String> = self.sig.constants.iter().collect();
        let funcs: Vec<(&String, &usize)> = self.sig.functions.iter().collect();
        if depth > 0 && !funcs.is_empty() && rng.gen_bool(0.5) {
            let (f, &arity) = *funcs.choose(rng).unwrap();
            let args = (0..arity).map(|_| self.term(rng, depth - 1)).collect();
            return Term::app(f.clone(), args);
        }
        let pick_var = consts.is_empty() || (!self.vars.is_empty() && rng.gen_bool(0.6));
        if pick_var {
            Term::var(self.vars.choose(rng).expect("no variables or constants").clone())
        } else {
            Term::constant((*consts.choose(rng).unwrap()).clone())
        }
    }

    pub fn atom<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let preds: Vec<(&String, &usize)> = self.sig.predicates.iter().collect();
        if preds.is_empty() || rng.gen_bool(0.15) {
            let d = self.term_depth;
            return Formula::eq(self.term(rng, d), self.term(rng, d));
        }
        let (p, &arity) = *preds.choose(rng).unwrap();
        let args = (0..arity).map(|_| self.term(rng, self.term_depth)).collect();
        Formula::pred(p.clone(), args)
    }

    /// A formula of depth at most `self.depth`.
    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.formula_at(rng, self.depth)
    }

    pub fn formula_at<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.atom(rng);
        }
        let mut ops: Vec<u8> = vec![0, 1];
        if self.temporal {
            ops.extend([2, 3]);
        }
        if self.quantifiers && !self.vars.is_empty() {
            ops.push(4);
        }
        if self.sugar {
            ops.extend([5, 6, 7]);
            if self.quantifiers && !self.vars.is_empty() {
                ops.push(8);
            }
            if self.temporal {
                ops.extend([9, 10, 11, 12]);
            }
        }
        let d = depth - 1;
        match *ops.choose(rng).unwrap() {
            0 => self.formula_at(rng, d).not(),
            1 => self.formula_at(rng, d).and(self.formula_at(rng, d)),
            2 => self.formula_at(rng, d).g(),
            3 => self.formula_at(rng, d).h(),
            4 => Formula::forall(self.vars.choose(rng).unwrap().clone(), self.formula_at(rng, d)),
            5 => self.formula_at(rng, d).or(self.formula_at(rng, d)),
            6 => self.formula_at(rng, d).implies(self.formula_at(rng, d)),
            7 => self.formula_at(rng, d).iff(self.formula_at(rng, d)),
            8 => Formula::exists(self.vars.choose(rng).unwrap().clone(), self.formula_at(rng, d)),
            9 => self.formula_at(rng, d).f(),
            10 => self.formula_at(rng, d).p(),
            11 => self.formula_at(rng, d).always(),
            _ => self.formula_at(rng, d).sometime(),
        }
    }
}

/// A random subset of a flow with `points` points.
pub fn random_set<R: Rng + ?Sized>(rng: &mut R, points: usize) -> TruthSet {
    TruthSet::from_bits(rng.gen::<u64>()).intersection(TruthSet::full(points))
}

/// An arbitrary family (no closure conditions) of up to `max_members` sets.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, points: usize, max_members: usize) -> PropFamily {
    let count = rng.gen_range(0..=max_members);
    PropFamily::from_sets(points, (0..count).map(|_| random_set(rng, points)))
}

/// Interpretation of `sig` over `points` times and `size` elements. Atomic
/// truth sets are drawn from `prop` when given, else from all subsets.
pub fn random_interpretation<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    points: usize,
    size: usize,
    prop: Option<&PropFamily>,
) -> Interpretation {
    let members: Option<Vec<TruthSet>> = prop.map(|p| p.members().collect());
    let mut interp = Interpretation::default();
    for c in &sig.constants {
        interp.constants.insert(c.clone(), rng.gen_range(0..size));
    }
    for (f, &arity) in &sig.functions {
        interp
            .functions
            .insert(f.clone(), Table::from_fn(arity, size, |_| rng.gen_range(0..size)));
    }
    for (p, &arity) in &sig.predicates {
        let table = Table::from_fn(arity, size, |_| match &members {
            Some(m) => *m.choose(rng).expect("prop has members"),
            None => random_set(rng, points),
        });
        interp.predicates.insert(p.clone(), table);
    }
    interp
}

/// A standard model of `sig` with `1..=tmax` points and `1..=umax` elements.
pub fn random_standard_model<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    tmax: usize,
    umax: usize,
) -> Structure {
    let t = rng.gen_range(1..=tmax);
    let u = rng.gen_range(1..=umax);
    let interp = random_interpretation(rng, sig, t, u, None);
    Structure::standard(TimeFlow::numbered(t).unwrap(), element_names(u), interp)
        .expect("generated interpretation is well formed")
}

/// A premodel whose atoms draw from `prop`, which need not be closed.
pub fn random_premodel<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    prop: PropFamily,
    umax: usize,
) -> Structure {
    let t = prop.points();
    let u = rng.gen_range(1..=umax);
    let interp = random_interpretation(rng, sig, t, u, Some(&prop).filter(|p| !p.is_empty()));
    Structure::premodel(TimeFlow::numbered(t).unwrap(), prop, element_names(u), interp)
        .expect("generated interpretation is well formed")
}
