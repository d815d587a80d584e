//! Bounded search for standard models (`prop = ℘T`) that falsify or satisfy a
//! formula.
//!
//! The exhaustive mode fills interpretation cells one at a time in a fixed
//! order and evaluates the formula three-valued (Kleene) on the partial
//! interpretation, cutting a branch as soon as the outcome is settled. The
//! order of candidates is: `|T|` ascending, then `|U|`, then interpretations
//! lexicographically by cell, so the first witness returned is the
//! enumeration-least one.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{assignments, Assignment, Interpretation, ModelError, Structure, Table, TimeFlow, TruthSet};
use crate::random::random_interpretation;
use crate::syntax::{Formula, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub tmax: usize,
    pub umax: usize,
    pub mode: SearchMode,
    /// Maximum number of search nodes (exhaustive) before giving up.
    pub budget: u64,
}

impl SearchBounds {
    pub fn exhaustive(tmax: usize, umax: usize) -> Self {
        SearchBounds {
            tmax,
            umax,
            mode: SearchMode::Exhaustive,
            budget: 20_000_000,
        }
    }

    pub fn random(tmax: usize, umax: usize, seed: u64, samples: usize) -> Self {
        SearchBounds {
            tmax,
            umax,
            mode: SearchMode::Random { seed, samples },
            budget: u64::MAX,
        }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        SearchBounds { budget, ..self }
    }
}

/// A model with a point and assignment at which the query was decided.
#[derive(Clone, Debug)]
pub struct Witness {
    pub model: Structure,
    pub point: usize,
    pub assignment: Assignment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    Falsify,
    Satisfy,
}

/// A standard model and point where `φ` fails, or `None` if none exists in
/// the bounded space (exhaustive mode) or among the samples (random mode).
pub fn countermodel_search(phi: &Formula, bounds: &SearchBounds) -> Result<Option<Witness>, ModelError> {
    let sig = Signature::of_formula(phi).map_err(ModelError::Syntax)?;
    search(phi, &sig, bounds, Goal::Falsify)
}

/// Like [`countermodel_search`] but over an explicit signature, which may
/// contain symbols not occurring in `φ`.
pub fn countermodel_search_in(
    phi: &Formula,
    sig: &Signature,
    bounds: &SearchBounds,
) -> Result<Option<Witness>, ModelError> {
    search(phi, sig, bounds, Goal::Falsify)
}

/// A standard model, point and assignment at which `φ` holds.
pub fn find_model(phi: &Formula, bounds: &SearchBounds) -> Result<Option<Witness>, ModelError> {
    let sig = Signature::of_formula(phi).map_err(ModelError::Syntax)?;
    search(phi, &sig, bounds, Goal::Satisfy)
}

fn search(
    phi: &Formula,
    sig: &Signature,
    bounds: &SearchBounds,
    goal: Goal,
) -> Result<Option<Witness>, ModelError> {
    sig.check_formula(phi).map_err(ModelError::Syntax)?;
    match bounds.mode {
        SearchMode::Exhaustive => {
            let mut nodes = 0u64;
            for t in 1..=bounds.tmax {
                for u in 1..=bounds.umax {
                    let mut s = Search::new(phi, sig, t, u, goal, bounds.budget, nodes);
                    let found = s.run()?;
                    nodes = s.nodes;
                    if let Some(m) = found {
                        return Ok(Some(witness(phi, m, goal)?));
                    }
                }
            }
            Ok(None)
        }
        SearchMode::Random { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let t = rand::Rng::gen_range(&mut rng, 1..=bounds.tmax);
                let u = rand::Rng::gen_range(&mut rng, 1..=bounds.umax);
                let interp = random_interpretation(&mut rng, sig, t, u, None);
                let m = Structure::standard(TimeFlow::numbered(t)?, element_names(u), interp)?;
                let w = witness(phi, m, goal)?;
                let decided = match goal {
                    Goal::Falsify => !w.model.satisfies(w.point, &w.assignment, phi)?,
                    Goal::Satisfy => w.model.satisfies(w.point, &w.assignment, phi)?,
                };
                if decided {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
    }
}

/// Universe names `a0, a1, …`.
pub fn element_names(u: usize) -> Vec<String> {
    (0..u).map(|i| format!("a{i}")).collect()
}

/// Locates the point and assignment in a complete model. If none decides the
/// goal, returns point 0 and the first assignment.
fn witness(phi: &Formula, model: Structure, goal: Goal) -> Result<Witness, ModelError> {
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let full = TruthSet::full(model.points());
    let mut first = None;
    for f in assignments(&vars, model.size()) {
        let set = model.truth_set(phi, &f)?;
        let hit = match goal {
            Goal::Falsify => full.difference(set),
            Goal::Satisfy => set,
        };
        if let Some(t) = hit.points().next() {
            return Ok(Witness {
                model,
                point: t,
                assignment: f,
            });
        }
        first.get_or_insert(f);
    }
    Ok(Witness {
        model,
        point: 0,
        assignment: first.unwrap_or_default(),
    })
}

#[derive(Clone, Copy)]
enum Cell {
    PredBit { pred: usize, tuple: usize, t: usize },
    Const(usize),
    Func { func: usize, tuple: usize },
}

/// A truth value known on `known`, equal to `val` there.
#[derive(Clone, Copy)]
struct PartialSet {
    known: TruthSet,
    val: TruthSet,
}

/// Three-valued truth set: `tt` where definitely true, `ff` where definitely false.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Kleene {
    tt: TruthSet,
    ff: TruthSet,
}

struct Search {
    phi: Formula,
    goal: Goal,
    points: usize,
    size: usize,
    pred_names: Vec<String>,
    pred_index: BTreeMap<String, usize>,
    preds: Vec<(usize, Vec<PartialSet>)>,
    const_names: Vec<String>,
    const_index: BTreeMap<String, usize>,
    consts: Vec<Option<usize>>,
    func_names: Vec<String>,
    func_index: BTreeMap<String, usize>,
    funcs: Vec<(usize, Vec<Option<usize>>)>,
    cells: Vec<Cell>,
    budget: u64,
    nodes: u64,
}

impl Search {
    fn new(
        phi: &Formula,
        sig: &Signature,
        points: usize,
        size: usize,
        goal: Goal,
        budget: u64,
        nodes: u64,
    ) -> Self {
        // evaluate the closure: universal for falsification, existential for satisfaction
        let mut closed = phi.normalize();
        for x in phi.free_vars().into_iter().rev() {
            closed = match goal {
                Goal::Falsify => Formula::forall(x, closed),
                Goal::Satisfy => Formula::forall(x, closed.not()).not(),
            };
        }
        let mut preds: Vec<(&String, &usize)> = sig.predicates.iter().collect();
        preds.sort_by_key(|(name, arity)| (**arity, (*name).clone()));
        let mut funcs: Vec<(&String, &usize)> = sig.functions.iter().collect();
        funcs.sort_by_key(|(name, arity)| (**arity, (*name).clone()));

        let mut cells = Vec::new();
        for (i, (_, &arity)) in preds.iter().enumerate() {
            for tuple in 0..size.pow(arity as u32) {
                for t in 0..points {
                    cells.push(Cell::PredBit { pred: i, tuple, t });
                }
            }
        }
        cells.extend((0..sig.constants.len()).map(Cell::Const));
        for (i, (_, &arity)) in funcs.iter().enumerate() {
            for tuple in 0..size.pow(arity as u32) {
                cells.push(Cell::Func { func: i, tuple });
            }
        }
        let unknown = PartialSet {
            known: TruthSet::EMPTY,
            val: TruthSet::EMPTY,
        };
        Search {
            phi: closed,
            goal,
            points,
            size,
            pred_names: preds.iter().map(|(n, _)| (*n).clone()).collect(),
            pred_index: preds.iter().enumerate().map(|(i, (n, _))| ((*n).clone(), i)).collect(),
            preds: preds
                .iter()
                .map(|(_, &a)| (a, vec![unknown; size.pow(a as u32)]))
                .collect(),
            const_names: sig.constants.iter().cloned().collect(),
            const_index: sig.constants.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            consts: vec![None; sig.constants.len()],
            func_names: funcs.iter().map(|(n, _)| (*n).clone()).collect(),
            func_index: funcs.iter().enumerate().map(|(i, (n, _))| ((*n).clone(), i)).collect(),
            funcs: funcs
                .iter()
                .map(|(_, &a)| (a, vec![None; size.pow(a as u32)]))
                .collect(),
            cells,
            budget,
            nodes,
        }
    }

    fn run(&mut self) -> Result<Option<Structure>, ModelError> {
        if self.dfs(0)? {
            Ok(Some(self.complete()?))
        } else {
            Ok(None)
        }
    }

    /// Status of the goal: `Some(true)` reached, `Some(false)` impossible.
    fn status(&self) -> Option<bool> {
        let k = self.eval(&self.phi, &mut Assignment::new());
        let full = TruthSet::full(self.points);
        let (reached, blocked) = match self.goal {
            Goal::Falsify => (!k.ff.is_empty(), k.tt == full),
            Goal::Satisfy => (!k.tt.is_empty(), k.ff == full),
        };
        if reached {
            Some(true)
        } else if blocked {
            Some(false)
        } else {
            None
        }
    }

    fn dfs(&mut self, depth: usize) -> Result<bool, ModelError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ModelError::BudgetExceeded(self.budget));
        }
        match self.status() {
            Some(true) => {
                // fill the rest with the least values
                for i in depth..self.cells.len() {
                    self.assign(self.cells[i], 0);
                }
                return Ok(true);
            }
            Some(false) => return Ok(false),
            None => {}
        }
        let Some(&cell) = self.cells.get(depth) else {
            return Ok(false);
        };
        let options = match cell {
            Cell::PredBit { .. } => 2,
            _ => self.size,
        };
        for v in 0..options {
            self.assign(cell, v);
            if self.dfs(depth + 1)? {
                return Ok(true);
            }
        }
        self.unassign(cell);
        Ok(false)
    }

    fn assign(&mut self, cell: Cell, v: usize) {
        match cell {
            Cell::PredBit { pred, tuple, t } => {
                let s = &mut self.preds[pred].1[tuple];
                s.known = s.known.with(t);
                s.val = if v == 1 { s.val.with(t) } else { s.val.without(t) };
            }
            Cell::Const(c) => self.consts[c] = Some(v),
            Cell::Func { func, tuple } => self.funcs[func].1[tuple] = Some(v),
        }
    }

    fn unassign(&mut self, cell: Cell) {
        match cell {
            Cell::PredBit { pred, tuple, t } => {
                let s = &mut self.preds[pred].1[tuple];
                s.known = s.known.without(t);
                s.val = s.val.without(t);
            }
            Cell::Const(c) => self.consts[c] = None,
            Cell::Func { func, tuple } => self.funcs[func].1[tuple] = None,
        }
    }

    fn complete(&self) -> Result<Structure, ModelError> {
        let mut interp = Interpretation::default();
        for (i, name) in self.pred_names.iter().enumerate() {
            let (arity, sets) = &self.preds[i];
            let values = sets.iter().map(|s| s.val).collect();
            interp
                .predicates
                .insert(name.clone(), Table::from_values(*arity, self.size, values)?);
        }
        for (i, name) in self.const_names.iter().enumerate() {
            interp.constants.insert(name.clone(), self.consts[i].unwrap_or(0));
        }
        for (i, name) in self.func_names.iter().enumerate() {
            let (arity, vals) = &self.funcs[i];
            let values = vals.iter().map(|v| v.unwrap_or(0)).collect();
            interp
                .functions
                .insert(name.clone(), Table::from_values(*arity, self.size, values)?);
        }
        Structure::standard(TimeFlow::numbered(self.points)?, element_names(self.size), interp)
    }

    fn term(&self, term: &Term, env: &Assignment) -> Option<usize> {
        match term {
            Term::Var(x) => env.get(x),
            Term::Const(c) => self.consts[self.const_index[c]],
            Term::App(f, args) => {
                let i = self.func_index[f];
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.term(a, env)?;
                }
                self.funcs[i].1[idx]
            }
        }
    }

    /// Kleene evaluation of a core formula.
    fn eval(&self, phi: &Formula, env: &mut Assignment) -> Kleene {
        let n = self.points;
        let full = TruthSet::full(n);
        let unknown = Kleene {
            tt: TruthSet::EMPTY,
            ff: TruthSet::EMPTY,
        };
        match phi {
            Formula::Pred(p, args) => {
                let i = self.pred_index[p];
                let mut idx = 0;
                for a in args {
                    match self.term(a, env) {
                        Some(v) => idx = idx * self.size + v,
                        None => return unknown,
                    }
                }
                let s = self.preds[i].1[idx];
                Kleene {
                    tt: s.known.intersection(s.val),
                    ff: s.known.difference(s.val),
                }
            }
            Formula::Eq(l, r) => match (self.term(l, env), self.term(r, env)) {
                (Some(a), Some(b)) if a == b => Kleene {
                    tt: full,
                    ff: TruthSet::EMPTY,
                },
                (Some(_), Some(_)) => Kleene {
                    tt: TruthSet::EMPTY,
                    ff: full,
                },
                _ => unknown,
            },
            Formula::Not(a) => {
                let k = self.eval(a, env);
                Kleene { tt: k.ff, ff: k.tt }
            }
            Formula::And(a, b) => {
                let x = self.eval(a, env);
                if x.ff == full {
                    return x;
                }
                let y = self.eval(b, env);
                Kleene {
                    tt: x.tt.intersection(y.tt),
                    ff: x.ff.union(y.ff),
                }
            }
            Formula::G(a) => {
                let k = self.eval(a, env);
                Kleene {
                    tt: k.tt.box_future(n),
                    ff: k.ff.diamond_future(n),
                }
            }
            Formula::H(a) => {
                let k = self.eval(a, env);
                Kleene {
                    tt: k.tt.box_past(n),
                    ff: k.ff.diamond_past(n),
                }
            }
            Formula::Forall(x, body) => {
                let saved = env.get(x);
                let mut acc = Kleene {
                    tt: full,
                    ff: TruthSet::EMPTY,
                };
                for a in 0..self.size {
                    env.insert(x.clone(), a);
                    let k = self.eval(body, env);
                    acc.tt = acc.tt.intersection(k.tt);
                    acc.ff = acc.ff.union(k.ff);
                    if acc.ff == full {
                        break;
                    }
                }
                match saved {
                    Some(v) => {
                        env.insert(x.clone(), v);
                    }
                    None => {
                        env.remove(x);
                    }
                }
                acc
            }
            other => unreachable!("search evaluates core formulas only, got {other}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_infer;

    fn formula(src: &str) -> Formula {
        parse_formula_infer(src, &[]).unwrap().0
    }

    #[test]
    fn least_countermodel_to_density() {
        let w = countermodel_search(&formula("G G p() -> G p()"), &SearchBounds::exhaustive(3, 1))
            .unwrap()
            .expect("density fails on discrete flows");
        assert_eq!(w.model.points(), 2);
        assert_eq!(w.model.pred_value("p", &[]), Some(TruthSet::EMPTY));
        assert_eq!(w.point, 0);
        assert!(!w.model.satisfies(w.point, &w.assignment, &formula("G G p() -> G p()")).unwrap());
    }

    #[test]
    fn no_countermodel_for_valid_formulas() {
        let bounds = SearchBounds::exhaustive(4, 3);
        assert!(countermodel_search(&formula("p() -> p()"), &bounds).unwrap().is_none());
        let barcan = formula("(forall x. G p(x)) -> G forall x. p(x)");
        assert!(countermodel_search(&barcan, &bounds).unwrap().is_none());
    }

    #[test]
    fn free_variables_are_read_universally() {
        let w = countermodel_search(&formula("p(x) -> G p(x)"), &SearchBounds::exhaustive(2, 1))
            .unwrap()
            .unwrap();
        assert!(!w.model.satisfies(w.point, &w.assignment, &formula("p(x) -> G p(x)")).unwrap());
    }

    #[test]
    fn satisfaction_search_finds_a_point() {
        let phi = formula("p() & F ~p()");
        let w = find_model(&phi, &SearchBounds::exhaustive(3, 1)).unwrap().unwrap();
        assert_eq!(w.model.points(), 2);
        assert!(w.model.satisfies(w.point, &w.assignment, &phi).unwrap());
        assert!(find_model(&formula("p() & ~p()"), &SearchBounds::exhaustive(3, 2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let phi = formula("forall x. forall y. r(x, y) -> G r(x, y)");
        let err = countermodel_search(&phi, &SearchBounds::exhaustive(4, 3).with_budget(1));
        assert!(matches!(err, Err(ModelError::BudgetExceeded(1))));
    }

    #[test]
    fn random_mode_is_reproducible() {
        let phi = formula("G p() -> F p()");
        let a = countermodel_search(&phi, &SearchBounds::random(3, 2, 7, 200)).unwrap().unwrap();
        let b = countermodel_search(&phi, &SearchBounds::random(3, 2, 7, 200)).unwrap().unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.point, b.point);
    }
}
