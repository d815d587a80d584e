use std::collections::BTreeMap;

use super::{match_axiom, Axiom, AxiomMatch, Instantiation, KernelError, Logic};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(Axiom, Instantiation),
    /// Index into the script's premises.
    Premise(usize),
    /// Cites the line proving `φ` and the line proving `φ → ψ`.
    MP { antecedent: usize, implication: usize },
    GenG(usize),
    GenH(usize),
    GenForall(usize, String),
}

impl Justification {
    pub fn cited(&self) -> Vec<usize> {
        match self {
            Justification::MP {
                antecedent,
                implication,
            } => vec![*antecedent, *implication],
            Justification::GenG(i) | Justification::GenH(i) | Justification::GenForall(i, _) => vec![*i],
            _ => vec![],
        }
    }

    pub fn mirror(&self) -> Justification {
        match self {
            Justification::Axiom(a, inst) => Justification::Axiom(a.mirror(), inst.mirror()),
            Justification::GenG(i) => Justification::GenH(*i),
            Justification::GenH(i) => Justification::GenG(*i),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub id: usize,
    pub formula: Formula,
    pub rule: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub logic: Logic,
    pub premises: Vec<Formula>,
    pub lines: Vec<ProofLine>,
    pub goal: Formula,
    /// Conjuncts of `δ` when the goal has the form `δ → φ`, in order.
    pub delta: Option<Vec<Formula>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `line` is the id of the offending line, or 0 for script-level faults.
    Rejected { line: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

fn same(a: &Formula, b: &Formula) -> bool {
    a == b || a.normalize() == b.normalize()
}

/// Checks every line of `script` in order.
pub fn check_proof(script: &ProofScript) -> Verdict {
    let reject = |line: usize, reason: String| Verdict::Rejected { line, reason };
    let mut position: BTreeMap<usize, usize> = BTreeMap::new();
    // whether each line depends on a premise
    let mut tainted: Vec<bool> = Vec::with_capacity(script.lines.len());
    for (k, line) in script.lines.iter().enumerate() {
        if let Some(prev) = k.checked_sub(1).map(|p| script.lines[p].id) {
            if line.id <= prev {
                return reject(line.id, format!("line id {} does not exceed previous id {prev}", line.id));
            }
        }
        let cite = |id: usize| -> Result<(&ProofLine, bool), String> {
            position
                .get(&id)
                .map(|&p| (&script.lines[p], tainted[p]))
                .ok_or_else(|| format!("cites line {id}, which is not an earlier line"))
        };
        let outcome: Result<bool, String> = match &line.rule {
            Justification::Axiom(axiom, inst) => {
                if axiom.tier() > script.logic {
                    Err(format!("axiom {axiom} belongs to {} but the script is in {}", axiom.tier(), script.logic))
                } else {
                    match match_axiom(*axiom, inst, &line.formula) {
                        Ok(AxiomMatch::Matches) => Ok(false),
                        Ok(AxiomMatch::Mismatch { expected: Some(e) }) => {
                            Err(format!("not an instance of {axiom}: expected `{e}`"))
                        }
                        Ok(AxiomMatch::Mismatch { expected: None }) => Err("not a tautology instance".into()),
                        Ok(AxiomMatch::SideConditionViolated(msg)) => {
                            Err(format!("side condition of {axiom} violated: {msg}"))
                        }
                        Err(e) => Err(e.to_string()),
                    }
                }
            }
            Justification::Premise(i) => match script.premises.get(*i) {
                Some(p) if same(p, &line.formula) => Ok(true),
                Some(_) => Err(format!("formula differs from premise {i}")),
                None => Err(format!("no premise {i}")),
            },
            Justification::MP {
                antecedent,
                implication,
            } => cite(*antecedent).and_then(|(a, ta)| {
                cite(*implication).and_then(|(imp, ti)| {
                    let expected = a.formula.clone().implies(line.formula.clone());
                    if same(&imp.formula, &expected) {
                        Ok(ta || ti)
                    } else {
                        Err(format!(
                            "line {implication} is not `{}` -> `{}`",
                            a.formula, line.formula
                        ))
                    }
                })
            }),
            Justification::GenG(i) | Justification::GenH(i) | Justification::GenForall(i, _) => {
                cite(*i).and_then(|(src, t)| {
                    let (expected, rule) = match &line.rule {
                        Justification::GenG(_) => (src.formula.clone().g(), "G"),
                        Justification::GenH(_) => (src.formula.clone().h(), "H"),
                        Justification::GenForall(_, x) => (Formula::forall(x.clone(), src.formula.clone()), "forall"),
                        _ => unreachable!(),
                    };
                    if t {
                        Err(format!("{rule}-generalisation applied to a line depending on a premise"))
                    } else if same(&expected, &line.formula) {
                        Ok(false)
                    } else {
                        Err(format!("expected `{expected}`"))
                    }
                })
            }
        };
        match outcome {
            Ok(t) => {
                position.insert(line.id, k);
                tainted.push(t);
            }
            Err(reason) => return reject(line.id, reason),
        }
    }
    match script.lines.last() {
        None => reject(0, "script has no lines".into()),
        Some(last) if !same(&last.formula, &script.goal) => {
            reject(last.id, format!("last line does not prove the goal `{}`", script.goal))
        }
        Some(_) => Verdict::Accepted,
    }
}

/// `Δ ⊢ φ`: the script proves `δ → φ` as a theorem, with `δ` a right-nested
/// conjunction of members of `Δ`.
///
/// An empty `delta` in the script means the goal is `φ` itself. Returns
/// `Ok(false)` if the script is rejected or proves something else.
pub fn entails(delta: &[Formula], phi: &Formula, script: &ProofScript) -> Result<bool, KernelError> {
    if !script.premises.is_empty() {
        return Err(KernelError::PremisesInTheoremMode);
    }
    if !check_proof(script).is_accepted() {
        return Ok(false);
    }
    if script.delta.as_ref().is_some_and(|d| d.is_empty()) {
        return Ok(same(&script.goal, phi));
    }
    let Formula::Implies(d, conclusion) = &script.goal else {
        return Ok(false);
    };
    if !same(conclusion, phi) {
        return Ok(false);
    }
    let member = |c: &Formula| delta.iter().any(|m| same(m, c));
    match &script.delta {
        Some(parts) => {
            if Formula::right_conjunction(parts).is_none_or(|c| !same(&c, d)) {
                return Ok(false);
            }
            match parts.iter().find(|c| !member(c)) {
                Some(c) => Err(KernelError::NotInDelta(c.to_string())),
                None => Ok(true),
            }
        }
        None => {
            let mut rest: &Formula = d;
            loop {
                if member(rest) {
                    return Ok(true);
                }
                match rest {
                    Formula::And(a, b) if member(a) => rest = b,
                    Formula::And(a, _) => return Err(KernelError::NotInDelta(a.to_string())),
                    other => return Err(KernelError::NotInDelta(other.to_string())),
                }
            }
        }
    }
}

/// Replaces every formula by its mirror image and every axiom and rule by its
/// mirror partner.
pub fn mirror_proof(script: &ProofScript) -> ProofScript {
    ProofScript {
        logic: script.logic,
        premises: script.premises.iter().map(Formula::mirror).collect(),
        lines: script
            .lines
            .iter()
            .map(|l| ProofLine {
                id: l.id,
                formula: l.formula.mirror(),
                rule: l.rule.mirror(),
            })
            .collect(),
        goal: script.goal.mirror(),
        delta: script
            .delta
            .as_ref()
            .map(|d| d.iter().map(Formula::mirror).collect()),
    }
}

/// Appends lines with consecutive ids, computing axiom formulas from their
/// instantiations.
#[derive(Clone, Debug)]
pub struct ScriptBuilder {
    lines: Vec<ProofLine>,
}

impl Default for ScriptBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ScriptBuilder {
    pub fn new() -> Self {
        ScriptBuilder { lines: Vec::new() }
    }

    fn push(&mut self, formula: Formula, rule: Justification) -> usize {
        let id = self.lines.len() + 1;
        self.lines.push(ProofLine { id, formula, rule });
        id
    }

    pub fn formula(&self, id: usize) -> &Formula {
        &self.lines[id - 1].formula
    }

    pub fn axiom(&mut self, axiom: Axiom, inst: Instantiation) -> Result<usize, KernelError> {
        let formula = axiom.instance(&inst).map_err(|e| match e {
            super::InstanceError::SideCondition(m) => KernelError::BadArgs(m),
            super::InstanceError::Malformed(k) => k,
        })?;
        Ok(self.push(formula, Justification::Axiom(axiom, inst)))
    }

    pub fn taut(&mut self, formula: Formula) -> usize {
        self.push(formula, Justification::Axiom(Axiom::Taut, Instantiation::new()))
    }

    pub fn premise(&mut self, formula: Formula, index: usize) -> usize {
        self.push(formula, Justification::Premise(index))
    }

    /// From `φ` (line `a`) and `φ → ψ` (line `imp`) infer `ψ`.
    pub fn mp(&mut self, a: usize, imp: usize) -> Result<usize, KernelError> {
        let psi = match self.formula(imp) {
            Formula::Implies(_, b) => (**b).clone(),
            other => return Err(KernelError::BadArgs(format!("`{other}` is not an implication"))),
        };
        Ok(self.push(
            psi,
            Justification::MP {
                antecedent: a,
                implication: imp,
            },
        ))
    }

    pub fn gen_g(&mut self, i: usize) -> usize {
        let f = self.formula(i).clone().g();
        self.push(f, Justification::GenG(i))
    }

    pub fn gen_h(&mut self, i: usize) -> usize {
        let f = self.formula(i).clone().h();
        self.push(f, Justification::GenH(i))
    }

    pub fn gen_forall(&mut self, i: usize, x: &str) -> usize {
        let f = Formula::forall(x, self.formula(i).clone());
        self.push(f, Justification::GenForall(i, x.to_string()))
    }

    /// From `a → b` (line `i`) and `b → c` (line `j`) infer `a → c`.
    pub fn chain(&mut self, i: usize, j: usize) -> Result<usize, KernelError> {
        let (a, b) = split_implication(self.formula(i))?;
        let (b2, c) = split_implication(self.formula(j))?;
        if b != b2 {
            return Err(KernelError::BadArgs(format!("cannot chain through `{b}` and `{b2}`")));
        }
        let ab = a.clone().implies(b.clone());
        let bc = b.implies(c.clone());
        let t = self.taut(ab.implies(bc.implies(a.implies(c))));
        let k = self.mp(i, t)?;
        self.mp(j, k)
    }

    /// From `a → b` (line `i`) infer `¬b → ¬a`.
    pub fn contrapose(&mut self, i: usize) -> Result<usize, KernelError> {
        let (a, b) = split_implication(self.formula(i))?;
        let t = self.taut(a.clone().implies(b.clone()).implies(b.not().implies(a.not())));
        self.mp(i, t)
    }

    pub fn finish(self, logic: Logic, goal: Formula) -> ProofScript {
        ProofScript {
            logic,
            premises: Vec::new(),
            lines: self.lines,
            goal,
            delta: None,
        }
    }

    pub fn finish_with_premises(self, logic: Logic, premises: Vec<Formula>, goal: Formula) -> ProofScript {
        ProofScript {
            premises,
            ..self.finish(logic, goal)
        }
    }
}

fn split_implication(f: &Formula) -> Result<(Formula, Formula), KernelError> {
    match f {
        Formula::Implies(a, b) => Ok(((**a).clone(), (**b).clone())),
        other => Err(KernelError::BadArgs(format!("`{other}` is not an implication"))),
    }
}
