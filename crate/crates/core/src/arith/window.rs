use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_arithmetic, ArithError, GUARD};
use crate::model::{assignments, Assignment, Interpretation, Structure, Table, TimeFlow, TruthSet};
use crate::syntax::Formula;

/// The standard model on the window `[-N, N]` for both time and universe,
/// with `succ`, `+` and `*` clamped into the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowModel {
    n: usize,
    model: Structure,
}

impl WindowModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &Structure {
        &self.model
    }

    pub fn into_model(self) -> Structure {
        self.model
    }

    /// The integer named by an element (or point) index.
    pub fn value(&self, index: usize) -> i64 {
        index as i64 - self.n as i64
    }

    pub fn index(&self, value: i64) -> Option<usize> {
        let i = value + self.n as i64;
        (0..=2 * self.n as i64).contains(&i).then_some(i as usize)
    }
}

/// Builds the window model for `N ≥ 1`.
pub fn build_window_model(n: usize) -> Result<WindowModel, ArithError> {
    if n == 0 {
        return Err(ArithError::EmptyWindow);
    }
    let size = 2 * n + 1;
    let lo = -(n as i64);
    let hi = n as i64;
    let names: Vec<String> = (lo..=hi).map(|v| v.to_string()).collect();
    let flow = TimeFlow::new(names.clone())?;
    let value = |i: usize| i as i64 + lo;
    let index = |v: i64| (v.clamp(lo, hi) - lo) as usize;
    let full = TruthSet::full(size);

    let mut interp = Interpretation::default();
    interp.constants.insert("0".into(), index(0));
    interp
        .functions
        .insert("succ".into(), Table::from_fn(1, size, |a| index(value(a[0]) + 1)));
    interp.functions.insert(
        "+".into(),
        Table::from_fn(2, size, |a| index(value(a[0]) + value(a[1]))),
    );
    interp.functions.insert(
        "*".into(),
        Table::from_fn(2, size, |a| index(value(a[0]) * value(a[1]))),
    );
    interp
        .predicates
        .insert("e".into(), Table::from_fn(1, size, |a| TruthSet::singleton(a[0])));
    interp.predicates.insert(
        "q".into(),
        Table::from_fn(1, size, |a| if value(a[0]) >= 0 { full } else { TruthSet::EMPTY }),
    );
    interp.predicates.insert(
        "prec".into(),
        Table::from_fn(2, size, |a| if a[0] < a[1] { full } else { TruthSet::EMPTY }),
    );
    let model = Structure::standard(flow, names, interp)?;
    Ok(WindowModel { n, model })
}

/// The arithmetic structure carried by the extension of a rigid `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSubstructure {
    /// Element indices of the host model, ascending.
    pub carrier: Vec<usize>,
    pub zero: usize,
}

impl QSubstructure {
    pub fn contains(&self, a: usize) -> bool {
        self.carrier.binary_search(&a).is_ok()
    }
}

/// Reads off `U_q = {a : |q|(a) = T}` with the restricted operations.
///
/// Fails unless `|q|(a)` is `∅` or `T` for every `a`, `0 ∈ U_q`, and `U_q` is
/// closed under `succ`, `+` and `*`.
pub fn extract_uq(m: &Structure) -> Result<QSubstructure, ArithError> {
    let missing = |s: &str| ArithError::MissingSymbol(s.to_string());
    let q = m.predicate(GUARD).filter(|t| t.arity() == 1).ok_or_else(|| missing(GUARD))?;
    let zero = m.constant("0").ok_or_else(|| missing("0"))?;
    let full = m.flow().full();
    let mut carrier = Vec::new();
    for a in 0..m.size() {
        let set = *q.get(&[a], m.size());
        if set == full {
            carrier.push(a);
        } else if !set.is_empty() {
            return Err(ArithError::NonRigid(m.universe()[a].clone()));
        }
    }
    let uq = QSubstructure { carrier, zero };
    if !uq.contains(zero) {
        return Err(ArithError::NotClosed("0".into()));
    }
    for (name, arity) in [("succ", 1), ("+", 2), ("*", 2)] {
        let table = m.function(name).filter(|t| t.arity() == arity).ok_or_else(|| missing(name))?;
        let closed = crate::model::tuples(arity, uq.carrier.len())
            .map(|ix| ix.iter().map(|&i| uq.carrier[i]).collect::<Vec<_>>())
            .all(|args| uq.contains(*table.get(&args, m.size())));
        if !closed {
            return Err(ArithError::NotClosed(name.into()));
        }
    }
    Ok(uq)
}

/// Classical truth of an arithmetic formula in `U_q` under `f`.
pub fn eval_arith(
    phi: &Formula,
    m: &Structure,
    uq: &QSubstructure,
    f: &Assignment,
) -> Result<bool, ArithError> {
    check_arithmetic(phi)?;
    for x in phi.free_vars() {
        match f.get(&x) {
            Some(a) if uq.contains(a) => {}
            _ => return Err(ArithError::OutsideCarrier(x)),
        }
    }
    let mut env = f.clone();
    eval(phi, m, uq, &mut env)
}

fn eval(phi: &Formula, m: &Structure, uq: &QSubstructure, f: &mut Assignment) -> Result<bool, ArithError> {
    Ok(match phi {
        Formula::Eq(l, r) => m.eval_term(l, f)? == m.eval_term(r, f)?,
        Formula::Not(a) => !eval(a, m, uq, f)?,
        Formula::And(a, b) => eval(a, m, uq, f)? && eval(b, m, uq, f)?,
        Formula::Or(a, b) => eval(a, m, uq, f)? || eval(b, m, uq, f)?,
        Formula::Implies(a, b) => !eval(a, m, uq, f)? || eval(b, m, uq, f)?,
        Formula::Iff(a, b) => eval(a, m, uq, f)? == eval(b, m, uq, f)?,
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let universal = matches!(phi, Formula::Forall(..));
            let saved = f.get(x);
            let mut result = universal;
            for &c in &uq.carrier {
                f.insert(x.clone(), c);
                if eval(a, m, uq, f)? != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(v) => {
                    f.insert(x.clone(), v);
                }
                None => {
                    f.remove(x);
                }
            }
            result
        }
        _ => unreachable!("checked arithmetic"),
    })
}

/// The unique time at which each element satisfies `e`.
pub fn e_times(m: &Structure) -> Result<Vec<usize>, ArithError> {
    let e = m
        .predicate("e")
        .filter(|t| t.arity() == 1)
        .ok_or_else(|| ArithError::MissingSymbol("e".into()))?;
    (0..m.size())
        .map(|a| {
            let set = *e.get(&[a], m.size());
            match (set.len(), set.points().next()) {
                (1, Some(t)) => Ok(t),
                _ => Err(ArithError::NoUniqueETime(m.universe()[a].clone())),
            }
        })
        .collect()
}

/// Which assignments [`check_translation`] visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Samples {
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub point: usize,
    pub assignment: Assignment,
    /// Truth in `U_q`.
    pub arithmetic: bool,
    /// Truth of the relativised formula at `point`.
    pub temporal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationReport {
    /// Number of (point, assignment) pairs compared.
    pub checked: usize,
    pub agreed: usize,
    pub first_disagreement: Option<Disagreement>,
}

impl TranslationReport {
    pub fn all_agree(&self) -> bool {
        self.checked == self.agreed
    }
}

/// Compares `U_q ⊨ φ[f]` with `M ⊨_t φ_q[f]` for every point `t` and the
/// sampled assignments of the free variables of `φ` into `U_q`.
pub fn check_translation(phi: &Formula, m: &Structure, samples: Samples) -> Result<TranslationReport, ArithError> {
    check_arithmetic(phi)?;
    TranslationChecker::new(m)?.check(phi, samples)
}

/// [`check_translation`] against one model, with `U_q` extracted once.
#[derive(Clone, Debug)]
pub struct TranslationChecker<'m> {
    model: &'m Structure,
    uq: QSubstructure,
}

impl<'m> TranslationChecker<'m> {
    pub fn new(model: &'m Structure) -> Result<Self, ArithError> {
        Ok(TranslationChecker {
            model,
            uq: extract_uq(model)?,
        })
    }

    pub fn uq(&self) -> &QSubstructure {
        &self.uq
    }

    pub fn check(&self, phi: &Formula, samples: Samples) -> Result<TranslationReport, ArithError> {
        let (m, uq) = (self.model, &self.uq);
        let relativized = phi.relativize(GUARD)?;
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        let lift = |f: Assignment| -> Assignment { f.iter().map(|(x, i)| (x, uq.carrier[i])).collect() };
        let sampled: Box<dyn Iterator<Item = Assignment>> = match samples {
            Samples::Exhaustive => Box::new(assignments(&vars, uq.carrier.len()).map(lift)),
            Samples::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let picks: Vec<Assignment> = (0..count)
                    .map(|_| {
                        vars.iter()
                            .map(|x| (x.clone(), uq.carrier[rng.gen_range(0..uq.carrier.len())]))
                            .collect()
                    })
                    .collect();
                Box::new(picks.into_iter())
            }
        };
        let mut report = TranslationReport {
            checked: 0,
            agreed: 0,
            first_disagreement: None,
        };
        for f in sampled {
            let arithmetic = eval_arith(phi, m, uq, &f)?;
            let set = m.truth_set(&relativized, &f)?;
            for t in 0..m.points() {
                report.checked += 1;
                let temporal = set.contains(t);
                if temporal == arithmetic {
                    report.agreed += 1;
                } else if report.first_disagreement.is_none() {
                    report.first_disagreement = Some(Disagreement {
                        point: t,
                        assignment: f.clone(),
                        arithmetic,
                        temporal,
                    });
                }
            }
        }
        Ok(report)
    }
}
