//! Helpers shared by the integration tests: independent reference
//! evaluators, random instances and corpora.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fotl::kernel::{Axiom, Instantiation, Justification, ProofScript};
use fotl::model::{element_names, Assignment, PropFamily, Structure, TimeFlow, TruthSet};
use fotl::random::{random_interpretation, random_standard_model, FormulaGen};
use fotl::syntax::{Formula, Signature, Term};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `c, d`; `f/1, g/2`; `s/0, p/1, r/2`.
pub fn small_sig() -> Signature {
    Signature::new()
        .with_constant("c")
        .with_constant("d")
        .with_function("f", 1)
        .with_function("g", 2)
        .with_predicate("s", 0)
        .with_predicate("p", 1)
        .with_predicate("r", 2)
}

pub fn gen(depth: usize) -> FormulaGen {
    let mut g = FormulaGen::new(small_sig(), &["x", "y", "z"]);
    g.depth = depth;
    g
}

/// Nesting depth of temporal operators and quantifiers together.
pub fn modal_quant_depth(f: &Formula) -> usize {
    use Formula::*;
    match f {
        Pred(..) | Eq(..) => 0,
        Not(a) => modal_quant_depth(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => modal_quant_depth(a).max(modal_quant_depth(b)),
        G(a) | H(a) | F(a) | P(a) | Always(a) | Sometime(a) | Forall(_, a) | Exists(_, a) => {
            1 + modal_quant_depth(a)
        }
    }
}

// ---------------------------------------------------------------------------
// Reference evaluation, written directly from the semantic clauses.

fn term_value(m: &Structure, t: &Term, f: &Assignment) -> usize {
    match t {
        Term::Var(x) => f.get(x).expect("assigned"),
        Term::Const(c) => m.constant(c).expect("constant"),
        Term::App(g, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, f)).collect();
            m.apply(g, &vals).expect("function")
        }
    }
}

/// Pointwise truth in a standard model: quantifiers range over the universe,
/// `G`/`H` over later/earlier points.
pub fn holds(m: &Structure, t: usize, f: &Assignment, phi: &Formula) -> bool {
    use Formula::*;
    let n = m.points();
    match phi {
        Pred(p, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, f)).collect();
            m.pred_value(p, &vals).expect("predicate").contains(t)
        }
        Eq(a, b) => term_value(m, a, f) == term_value(m, b, f),
        Not(a) => !holds(m, t, f, a),
        And(a, b) => holds(m, t, f, a) && holds(m, t, f, b),
        Or(a, b) => holds(m, t, f, a) || holds(m, t, f, b),
        Implies(a, b) => !holds(m, t, f, a) || holds(m, t, f, b),
        Iff(a, b) => holds(m, t, f, a) == holds(m, t, f, b),
        G(a) => (t + 1..n).all(|s| holds(m, s, f, a)),
        H(a) => (0..t).all(|s| holds(m, s, f, a)),
        F(a) => (t + 1..n).any(|s| holds(m, s, f, a)),
        P(a) => (0..t).any(|s| holds(m, s, f, a)),
        Always(a) => (0..n).all(|s| holds(m, s, f, a)),
        Sometime(a) => (0..n).any(|s| holds(m, s, f, a)),
        Forall(x, a) => (0..m.size()).all(|v| holds(m, t, &f.updated(x, v), a)),
        Exists(x, a) => (0..m.size()).any(|v| holds(m, t, &f.updated(x, v), a)),
    }
}

pub fn all_assignments(vars: &[String], size: usize) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|f| (0..size).map(move |a| f.updated(v, a)))
            .collect();
    }
    out
}

/// Validity in a standard model by the reference evaluator.
pub fn valid_reference(m: &Structure, phi: &Formula) -> bool {
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    all_assignments(&vars, m.size())
        .iter()
        .all(|f| (0..m.points()).all(|t| holds(m, t, f, phi)))
}

/// `⊓Z`: the union of the members contained in `⋂Z` (with `⋂∅ = T`).
pub fn glb_reference(members: &[TruthSet], points: usize, z: &[TruthSet]) -> TruthSet {
    let meet = z.iter().fold(TruthSet::full(points), |acc, s| acc.intersection(*s));
    members
        .iter()
        .filter(|y| y.is_subset(meet))
        .fold(TruthSet::EMPTY, |acc, y| acc.union(*y))
}

/// `⊔Z`: the intersection of the members containing `⋃Z`.
pub fn lub_reference(members: &[TruthSet], points: usize, z: &[TruthSet]) -> TruthSet {
    let join = z.iter().fold(TruthSet::EMPTY, |acc, s| acc.union(*s));
    members
        .iter()
        .filter(|y| join.is_subset(**y))
        .fold(TruthSet::full(points), |acc, y| acc.intersection(*y))
}

/// The least family containing `seed`, `∅` and `T` and closed under union,
/// complement and the two box operators, by naive iteration to a fixpoint.
pub fn closure_reference(seed: &[TruthSet], points: usize) -> BTreeSet<u64> {
    let full = TruthSet::full(points);
    let mut sets: BTreeSet<u64> = seed.iter().map(|s| s.bits()).collect();
    sets.insert(0);
    sets.insert(full.bits());
    loop {
        let current: Vec<TruthSet> = sets.iter().map(|&b| TruthSet::from_bits(b)).collect();
        let mut next = sets.clone();
        for a in &current {
            next.insert(a.complement(points).bits());
            let g = TruthSet::from_points((0..points).filter(|&t| (t + 1..points).all(|s| a.contains(s))));
            let h = TruthSet::from_points((0..points).filter(|&t| (0..t).all(|s| a.contains(s))));
            next.insert(g.bits());
            next.insert(h.bits());
            for b in &current {
                next.insert(a.union(*b).bits());
            }
        }
        if next == sets {
            return sets;
        }
        sets = next;
    }
}

pub fn powerset_bits(points: usize) -> BTreeSet<u64> {
    (0..1u64 << points).collect()
}

pub fn members(prop: &PropFamily) -> Vec<TruthSet> {
    prop.members().collect()
}

// ---------------------------------------------------------------------------
// Axiom instances.

/// Propositional schemes used to build `Taut` lines.
pub fn tautology(rng: &mut impl Rng, a: Formula, b: Formula, c: Formula) -> Formula {
    match rng.gen_range(0..7) {
        0 => a.clone().implies(b.implies(a)),
        1 => a.clone().or(a.not()),
        2 => a.clone().implies(b.clone()).implies(b.not().implies(a.not())),
        3 => a.clone().implies(b.clone()).implies(a.clone()).implies(a),
        4 => a
            .clone()
            .implies(b.clone().implies(c.clone()))
            .implies(a.clone().implies(b).implies(a.implies(c))),
        5 => a.clone().and(b.clone()).iff(b.and(a)),
        _ => a.clone().not().not().iff(a),
    }
}

fn term_in(rng: &mut impl Rng, g: &FormulaGen) -> Term {
    g.term(rng, 1)
}

/// A random instance of `axiom` whose formula has modal/quantifier depth at
/// most `max_depth`.
pub fn random_instance(
    rng: &mut impl Rng,
    axiom: Axiom,
    g: &FormulaGen,
    max_depth: usize,
) -> (Instantiation, Formula) {
    loop {
        let phi = g.formula(rng);
        let psi = g.formula(rng);
        let x = g.vars.choose(rng).unwrap().clone();
        let inst = match axiom {
            Axiom::Taut => Instantiation::new(),
            Axiom::UnivInst => Instantiation::new().phi(phi).x(x).tau(term_in(rng, g)),
            Axiom::UnivDist => Instantiation::new().phi(phi).psi(psi).x(x),
            Axiom::VacQuant => {
                let closed = Formula::forall(x.clone(), phi);
                Instantiation::new().phi(closed).x(x)
            }
            Axiom::SelfId => Instantiation::new().tau(term_in(rng, g)),
            Axiom::SubstId => {
                let tau = term_in(rng, g);
                let tau2 = term_in(rng, g);
                let (p, arity) = [("p", 1), ("r", 2)].choose(rng).copied().unwrap();
                let args: Vec<Term> = (0..arity)
                    .map(|_| if rng.gen_bool(0.6) { tau.clone() } else { term_in(rng, g) })
                    .collect();
                let atom = if rng.gen_bool(0.2) {
                    Formula::eq(args[0].clone(), tau.clone())
                } else {
                    Formula::pred(p, args)
                };
                let count: usize = atom_terms(&atom).iter().map(|t| t.count_occurrences(&tau)).sum();
                let mask: Vec<usize> = (0..count).filter(|_| rng.gen_bool(0.5)).collect();
                Instantiation::new().phi(atom).tau(tau).tau2(tau2).mask(mask)
            }
            Axiom::RigidId => Instantiation::new().tau(term_in(rng, g)).tau2(term_in(rng, g)),
            Axiom::KG | Axiom::KH | Axiom::LinFut | Axiom::LinPast => Instantiation::new().phi(phi).psi(psi),
            _ => Instantiation::new().phi(phi),
        };
        let formula = if axiom == Axiom::Taut {
            let (a, b, c) = (phi_of(&inst, g, rng), g.formula(rng), g.formula(rng));
            tautology(rng, a, b, c)
        } else {
            match axiom.instance(&inst) {
                Ok(f) => f,
                Err(_) => continue,
            }
        };
        if modal_quant_depth(&formula) <= max_depth {
            return (inst, formula);
        }
    }
}

fn phi_of(inst: &Instantiation, g: &FormulaGen, rng: &mut impl Rng) -> Formula {
    inst.phi.clone().unwrap_or_else(|| g.formula(rng))
}

fn atom_terms(f: &Formula) -> Vec<&Term> {
    match f {
        Formula::Pred(_, args) => args.iter().collect(),
        Formula::Eq(a, b) => vec![a, b],
        _ => vec![],
    }
}

pub const TIER_L: [Axiom; 11] = [
    Axiom::Taut,
    Axiom::UnivInst,
    Axiom::UnivDist,
    Axiom::VacQuant,
    Axiom::SelfId,
    Axiom::SubstId,
    Axiom::RigidId,
    Axiom::KG,
    Axiom::KH,
    Axiom::GP,
    Axiom::HF,
];

// ---------------------------------------------------------------------------
// Script mutations.

/// A single-line change to an accepted script that makes it unsound or
/// ill-formed, or `None` if the chosen line admits no mutation of the
/// chosen kind.
pub fn mutate(script: &ProofScript, rng: &mut impl Rng) -> Option<(String, ProofScript)> {
    let mut s = script.clone();
    let k = rng.gen_range(0..s.lines.len());
    let line = s.lines[k].clone();
    let description;
    match rng.gen_range(0..7) {
        0 => {
            s.lines[k].formula = line.formula.clone().not();
            description = format!("negate formula of line {}", line.id);
        }
        1 => {
            // cite a different earlier line with a different formula
            let cited = line.rule.cited();
            let slot = *cited.choose(rng)?;
            let old = &script.lines.iter().find(|l| l.id == slot)?.formula;
            let alternatives: Vec<usize> = script.lines[..k]
                .iter()
                .filter(|l| l.formula.normalize() != old.normalize())
                .map(|l| l.id)
                .collect();
            let new = *alternatives.choose(rng)?;
            s.lines[k].rule = recite(&line.rule, slot, new);
            description = format!("line {} cites {new} instead of {slot}", line.id);
        }
        2 => {
            let cited = line.rule.cited();
            let slot = *cited.choose(rng)?;
            s.lines[k].rule = recite(&line.rule, slot, line.id);
            description = format!("line {} cites itself", line.id);
        }
        3 => {
            let Justification::Axiom(a, inst) = &line.rule else {
                return None;
            };
            let other = *Axiom::ALL.iter().filter(|b| *b != a).collect::<Vec<_>>().choose(rng)?;
            s.lines[k].rule = Justification::Axiom(*other, inst.clone());
            description = format!("line {} claims {other} instead of {a}", line.id);
        }
        4 => {
            let Justification::Axiom(a, inst) = &line.rule else {
                return None;
            };
            let mut inst = inst.clone();
            if let Some(phi) = inst.phi.take() {
                inst.phi = Some(phi.not());
            } else if let Some(t) = inst.tau.take() {
                inst.tau = Some(Term::app("f", vec![t]));
            } else {
                return None;
            }
            s.lines[k].rule = Justification::Axiom(*a, inst);
            description = format!("perturb metavariable of line {}", line.id);
        }
        5 => {
            s.lines[k].rule = Justification::Premise(0);
            description = format!("line {} claims a missing premise", line.id);
        }
        _ => {
            if k == 0 {
                return None;
            }
            s.lines[k].id = s.lines[k - 1].id;
            description = format!("line {} reuses the previous id", line.id);
        }
    }
    Some((description, s))
}

fn recite(rule: &Justification, from: usize, to: usize) -> Justification {
    let swap = |i: usize| if i == from { to } else { i };
    match rule {
        Justification::MP {
            antecedent,
            implication,
        } => {
            if *antecedent == from {
                Justification::MP {
                    antecedent: to,
                    implication: *implication,
                }
            } else {
                Justification::MP {
                    antecedent: *antecedent,
                    implication: swap(*implication),
                }
            }
        }
        Justification::GenG(i) => Justification::GenG(swap(*i)),
        Justification::GenH(i) => Justification::GenH(swap(*i)),
        Justification::GenForall(i, x) => Justification::GenForall(swap(*i), x.clone()),
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// Arithmetic corpus.

/// Terms of depth at most 1 over `0, x, y`.
pub fn shallow_terms() -> Vec<Term> {
    let base = vec![Term::zero(), Term::var("x"), Term::var("y")];
    let mut out = base.clone();
    for a in &base {
        out.push(a.clone().succ());
    }
    for a in &base {
        for b in &base {
            out.push(a.clone().plus(b.clone()));
            out.push(a.clone().times(b.clone()));
        }
    }
    out
}

/// Every term of depth at most 2 over `0, x, y`.
pub fn terms_depth2() -> Vec<Term> {
    let shallow = shallow_terms();
    let mut out = shallow.clone();
    for a in &shallow {
        if a.depth() == 1 {
            out.push(a.clone().succ());
        }
    }
    for a in &shallow {
        for b in &shallow {
            if a.depth() == 1 || b.depth() == 1 {
                out.push(a.clone().plus(b.clone()));
                out.push(a.clone().times(b.clone()));
            }
        }
    }
    out
}

/// Terms of depth at most 2 whose top operation has at most one compound
/// argument.
pub fn narrow_terms_depth2() -> Vec<Term> {
    terms_depth2()
        .into_iter()
        .filter(|t| match t {
            Term::App(_, args) => args.iter().filter(|a| a.depth() > 0).count() <= 1,
            _ => true,
        })
        .collect()
}

pub fn prefixes(body: Formula) -> Vec<Formula> {
    let q = |universal: bool, x: &str, f: Formula| {
        if universal {
            Formula::forall(x, f)
        } else {
            Formula::exists(x, f)
        }
    };
    let mut out = Vec::new();
    for (outer, inner) in [("x", "y"), ("y", "x")] {
        for a in [true, false] {
            for b in [true, false] {
                out.push(q(a, outer, q(b, inner, body.clone())));
            }
        }
    }
    out
}

/// Sentences `Q₁ Q₂ (s = t)` for every prefix over `x, y`, left sides drawn
/// from `left` and right sides from [`shallow_terms`].
pub fn quantified_identities(left: &[Term]) -> Vec<Formula> {
    let right = shallow_terms();
    let mut out = Vec::new();
    for s in left {
        for t in &right {
            out.extend(prefixes(Formula::eq(s.clone(), t.clone())));
        }
    }
    out
}

/// Open formulas of quantifier depth at most 1 and Boolean combinations,
/// for checking all assignments.
pub fn open_formulas() -> Vec<Formula> {
    let shallow = shallow_terms();
    let mut atoms = Vec::new();
    for s in &shallow {
        for t in &shallow {
            atoms.push(Formula::eq(s.clone(), t.clone()));
        }
    }
    let mut out = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        out.push(a.clone());
        out.push(Formula::forall("x", a.clone()));
        out.push(Formula::exists("y", a.clone()));
        let b = &atoms[(i * 37 + 11) % atoms.len()];
        out.push(Formula::exists("x", a.clone().and(b.clone().not())));
        out.push(Formula::forall("y", a.clone().or(b.clone())).implies(Formula::exists("x", b.clone())));
    }
    out
}

/// A seeded sample of sentences with both sides of depth at most 2.
pub fn sampled_deep_identities(rng: &mut impl Rng, count: usize) -> Vec<Formula> {
    let all = terms_depth2();
    (0..count)
        .map(|_| {
            let body = Formula::eq(all.choose(rng).unwrap().clone(), all.choose(rng).unwrap().clone());
            prefixes(body).choose(rng).unwrap().clone()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Substitution.

pub fn random_model_and_formula(r: &mut impl Rng) -> (Structure, Formula) {
    let m = random_standard_model(r, &small_sig(), 5, 3);
    (m, gen(4).formula(r))
}

/// `M ⊨_t φ(τ/x)[f]` iff `M ⊨_t φ[f[|τ|f / x]]`, over `count` random triples.
pub fn substitution_lemma_disagreements(seed: u64, count: usize) -> usize {
    let mut r = rng(seed);
    let mut bad = 0;
    let mut done = 0;
    while done < count {
        let (m, phi) = random_model_and_formula(&mut r);
        let x = *["x", "y", "z"].choose(&mut r).unwrap();
        let tau = gen(0).term(&mut r, 2);
        let Ok(sub) = phi.substitute(x, &tau) else { continue };
        done += 1;
        let mut vars: Vec<String> = phi.free_vars().into_iter().chain(tau.vars()).collect();
        vars.sort();
        vars.dedup();
        let a = all_assignments(&vars, m.size()).choose(&mut r).cloned().unwrap();
        let value = m.eval_term(&tau, &a).unwrap();
        let lhs = m.truth_set(&sub, &a).unwrap();
        let rhs = m.truth_set(&phi, &a.updated(x, value)).unwrap();
        bad += usize::from(lhs != rhs);
    }
    bad
}

/// A standard model in which every element is named by a constant `k0, k1, …`.
pub fn named_model(r: &mut impl Rng) -> (Structure, Vec<String>) {
    let points = r.gen_range(1..=4);
    let size = r.gen_range(1..=3);
    let mut sig = small_sig();
    let names: Vec<String> = (0..size).map(|i| format!("k{i}")).collect();
    for k in &names {
        sig = sig.with_constant(k);
    }
    let mut interp = random_interpretation(r, &sig, points, size, None);
    for (i, k) in names.iter().enumerate() {
        interp.constants.insert(k.clone(), i);
    }
    let m = Structure::standard(TimeFlow::numbered(points).unwrap(), element_names(size), interp).unwrap();
    (m, names)
}

/// `M, t, f ⊨ φ` iff `M, t ⊨ φ^f` in fully named models, over `count`
/// random triples.
pub fn substf_disagreements(seed: u64, count: usize) -> usize {
    let mut r = rng(seed);
    let mut bad = 0;
    for _ in 0..count {
        let (m, names) = named_model(&mut r);
        let phi = gen(4).formula(&mut r);
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        let a = all_assignments(&vars, m.size()).choose(&mut r).cloned().unwrap();
        let naming: BTreeMap<String, String> = a.iter().map(|(v, i)| (v.to_string(), names[i].clone())).collect();
        let closed = phi.apply_assignment(&naming).unwrap();
        assert!(closed.free_vars().is_empty());
        bad += usize::from(m.truth_set(&phi, &a).unwrap() != m.truth_set(&closed, &Assignment::new()).unwrap());
    }
    bad
}
