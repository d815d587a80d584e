use std::collections::BTreeMap;

use super::{ModelError, Structure, TruthSet};
use crate::syntax::{Formula, Term};

/// Values of variables, held on the finite support a query needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn insert(&mut self, var: impl Into<String>, value: usize) -> Option<usize> {
        self.0.insert(var.into(), value)
    }

    pub(crate) fn remove(&mut self, var: &str) -> Option<usize> {
        self.0.remove(var)
    }

    /// Overwrites the value of a variable already present.
    pub(crate) fn set_existing(&mut self, var: &str, value: usize) {
        *self.0.get_mut(var).expect("variable present") = value;
    }

    /// `f[a/x]`.
    pub fn updated(&self, var: &str, value: usize) -> Assignment {
        let mut out = self.clone();
        out.insert(var, value);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Every assignment of `vars` into a universe of `size` elements, in
/// lexicographic order of values.
pub fn assignments<'a>(vars: &'a [String], size: usize) -> impl Iterator<Item = Assignment> + 'a {
    super::tuples(vars.len(), size).map(move |vals| vars.iter().cloned().zip(vals).collect())
}

impl Structure {
    pub fn eval_term(&self, term: &Term, f: &Assignment) -> Result<usize, ModelError> {
        match term {
            Term::Var(x) => f.get(x).ok_or_else(|| ModelError::UnboundVariable(x.clone())),
            Term::Const(c) => self
                .constant(c)
                .ok_or_else(|| ModelError::UnknownSymbol(c.clone())),
            Term::App(name, args) => {
                let table = self
                    .function(name)
                    .ok_or_else(|| ModelError::UnknownSymbol(name.clone()))?;
                if table.arity() != args.len() {
                    return Err(ModelError::Arity {
                        symbol: name.clone(),
                        expected: table.arity(),
                        found: args.len(),
                    });
                }
                let mut index = 0;
                for a in args {
                    index = index * self.size() + self.eval_term(a, f)?;
                }
                Ok(table.values()[index])
            }
        }
    }

    /// `|φ| f`, the set of points where `φ` holds under `f`.
    pub fn truth_set(&self, phi: &Formula, f: &Assignment) -> Result<TruthSet, ModelError> {
        let mut env = f.clone();
        self.eval(phi, &mut env)
    }

    fn eval(&self, phi: &Formula, env: &mut Assignment) -> Result<TruthSet, ModelError> {
        use Formula::*;
        let n = self.points();
        let full = TruthSet::full(n);
        Ok(match phi {
            Pred(p, args) => {
                let table = self
                    .predicate(p)
                    .ok_or_else(|| ModelError::UnknownSymbol(p.clone()))?;
                if table.arity() != args.len() {
                    return Err(ModelError::Arity {
                        symbol: p.clone(),
                        expected: table.arity(),
                        found: args.len(),
                    });
                }
                let mut index = 0;
                for a in args {
                    index = index * self.size() + self.eval_term(a, env)?;
                }
                table.values()[index]
            }
            Eq(l, r) => {
                if self.eval_term(l, env)? == self.eval_term(r, env)? {
                    full
                } else {
                    TruthSet::EMPTY
                }
            }
            Not(a) => self.eval(a, env)?.complement(n),
            And(a, b) => self.eval(a, env)?.intersection(self.eval(b, env)?),
            Or(a, b) => self.eval(a, env)?.union(self.eval(b, env)?),
            Implies(a, b) => self.eval(a, env)?.complement(n).union(self.eval(b, env)?),
            Iff(a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                x.complement(n).union(y).intersection(y.complement(n).union(x))
            }
            G(a) => self.eval(a, env)?.box_future(n),
            H(a) => self.eval(a, env)?.box_past(n),
            F(a) => self.eval(a, env)?.diamond_future(n),
            P(a) => self.eval(a, env)?.diamond_past(n),
            Always(a) => {
                let x = self.eval(a, env)?;
                x.box_past(n).intersection(x).intersection(x.box_future(n))
            }
            Sometime(a) => {
                let x = self.eval(a, env)?;
                x.diamond_past(n).union(x).union(x.diamond_future(n))
            }
            Forall(x, a) => {
                let instances = self.instances(x, a, env, false)?;
                self.prop().glb(instances)
            }
            Exists(x, a) => {
                // ¬∀x¬
                let instances = self.instances(x, a, env, true)?;
                self.prop().glb(instances).complement(n)
            }
        })
    }

    /// `{|φ| f[a/x] : a ∈ U}`, complemented when `negate` is set.
    fn instances(
        &self,
        x: &str,
        body: &Formula,
        env: &mut Assignment,
        negate: bool,
    ) -> Result<Vec<TruthSet>, ModelError> {
        let saved = env.get(x);
        env.insert(x, 0);
        let mut out = Vec::with_capacity(self.size());
        let mut result = Ok(());
        for a in 0..self.size() {
            env.set_existing(x, a);
            match self.eval(body, env) {
                Ok(s) => out.push(if negate { s.complement(self.points()) } else { s }),
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        match saved {
            Some(v) => env.set_existing(x, v),
            None => {
                env.remove(x);
            }
        }
        result.map(|_| out)
    }

    /// `M, t, f ⊨ φ`.
    pub fn satisfies(&self, t: usize, f: &Assignment, phi: &Formula) -> Result<bool, ModelError> {
        if t >= self.points() {
            return Err(ModelError::UnknownPoint(t.to_string()));
        }
        Ok(self.truth_set(phi, f)?.contains(t))
    }

    /// Every formula in `corpus`, and every subformula of one, is admissible
    /// under every assignment to its free variables.
    pub fn is_model(&self, corpus: &[Formula]) -> Result<bool, ModelError> {
        for phi in corpus {
            for sub in phi.subformulas() {
                let vars: Vec<String> = sub.free_vars().into_iter().collect();
                for f in assignments(&vars, self.size()) {
                    if !self.prop().contains(self.truth_set(sub, &f)?) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Every universal subformula (after expanding abbreviations) has as
    /// truth set the plain intersection of its instances.
    pub fn is_kripkean(&self, corpus: &[Formula]) -> Result<bool, ModelError> {
        for phi in corpus {
            let core = phi.normalize();
            for sub in core.subformulas() {
                let Formula::Forall(x, body) = sub else { continue };
                let vars: Vec<String> = sub.free_vars().into_iter().collect();
                for f in assignments(&vars, self.size()) {
                    let meet = (0..self.size())
                        .map(|a| self.truth_set(body, &f.updated(x, a)))
                        .try_fold(TruthSet::full(self.points()), |acc, s| {
                            s.map(|s| acc.intersection(s))
                        })?;
                    if self.truth_set(sub, &f)? != meet {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `|φ| f = T` for every assignment `f`.
    pub fn valid_in(&self, phi: &Formula) -> Result<bool, ModelError> {
        Ok(self.falsifier(phi)?.is_none())
    }

    /// The first assignment (lexicographic) and earliest point falsifying `φ`.
    pub fn falsifier(&self, phi: &Formula) -> Result<Option<(usize, Assignment)>, ModelError> {
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        let full = TruthSet::full(self.points());
        for f in assignments(&vars, self.size()) {
            let set = self.truth_set(phi, &f)?;
            if let Some(t) = full.difference(set).points().next() {
                return Ok(Some((t, f)));
            }
        }
        Ok(None)
    }
}
