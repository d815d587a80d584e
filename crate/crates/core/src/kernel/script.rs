//! Proof-script files.
//!
//! ```json
//! {
//!   "logic": "L",
//!   "premises": [],
//!   "signature": {"predicates": {"p": 1}},
//!   "lines": [
//!     {"id": 1, "formula": "p(x) -> p(x)", "rule": "axiom", "args": {"axiom": "Taut"}},
//!     {"id": 2, "formula": "G (p(x) -> p(x))", "rule": "gen_g", "args": {"from": 1}}
//!   ],
//!   "goal": "G (p(x) -> p(x))"
//! }
//! ```
//!
//! Rules and their `args`:
//!
//! | rule         | args                                                        |
//! |--------------|-------------------------------------------------------------|
//! | `axiom`      | `axiom`, and the scheme's `phi`, `psi`, `x`, `tau`, `tau2`, `mask` |
//! | `premise`    | `index` into `premises`                                     |
//! | `mp`         | `antecedent`, `implication` (line ids)                      |
//! | `gen_g`, `gen_h` | `from`                                                  |
//! | `gen_forall` | `from`, `var`                                               |
//!
//! `mask` lists occurrence indices (preorder, from 0). With a `signature`
//! formulas are parsed strictly against it; without one the signature is
//! inferred and bare names are variables. `delta`, when present, lists the
//! conjuncts of the antecedent used for entailment.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Axiom, Instantiation, Justification, KernelError, Logic, ProofLine, ProofScript};
use crate::syntax::{
    parse_formula, parse_formula_with, parse_term, parse_term_with, print_formula, print_term,
    Formula, Signature, SyntaxError, Term,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptFile {
    pub logic: Logic,
    #[serde(default)]
    pub premises: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
    pub lines: Vec<LineFile>,
    pub goal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub id: usize,
    pub formula: String,
    pub rule: String,
    #[serde(default)]
    pub args: serde_json::Value,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomArgs {
    axiom: Axiom,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    psi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mask: Option<BTreeSet<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PremiseArgs {
    index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MpArgs {
    antecedent: usize,
    implication: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenArgs {
    from: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<String>,
}

struct Reader {
    strict: Option<Signature>,
    inferred: Signature,
}

impl Reader {
    fn formula(&mut self, text: &str) -> Result<Formula, SyntaxError> {
        match &self.strict {
            Some(sig) => parse_formula(text, sig),
            None => parse_formula_with(text, &[], &mut self.inferred),
        }
    }

    fn term(&mut self, text: &str) -> Result<Term, SyntaxError> {
        match &self.strict {
            Some(sig) => parse_term(text, sig),
            None => parse_term_with(text, &[], &mut self.inferred),
        }
    }
}

fn args<T: for<'de> Deserialize<'de>>(id: usize, value: &serde_json::Value) -> Result<T, KernelError> {
    serde_json::from_value(value.clone()).map_err(|e| KernelError::BadArgs(format!("line {id}: {e}")))
}

impl ScriptFile {
    pub fn to_script(&self) -> Result<ProofScript, KernelError> {
        if let Some(sig) = &self.signature {
            sig.check()?;
        }
        let mut r = Reader {
            strict: self.signature.clone(),
            inferred: Signature::new(),
        };
        let in_line = |id: usize| move |e: SyntaxError| KernelError::Line { id, source: Box::new(e.into()) };
        let premises = self
            .premises
            .iter()
            .map(|p| r.formula(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for l in &self.lines {
            let formula = r.formula(&l.formula).map_err(in_line(l.id))?;
            let rule = match l.rule.as_str() {
                "axiom" => {
                    let a: AxiomArgs = args(l.id, &l.args)?;
                    let inst = Instantiation {
                        phi: a.phi.as_deref().map(|s| r.formula(s)).transpose().map_err(in_line(l.id))?,
                        psi: a.psi.as_deref().map(|s| r.formula(s)).transpose().map_err(in_line(l.id))?,
                        x: a.x,
                        tau: a.tau.as_deref().map(|s| r.term(s)).transpose().map_err(in_line(l.id))?,
                        tau2: a.tau2.as_deref().map(|s| r.term(s)).transpose().map_err(in_line(l.id))?,
                        mask: a.mask,
                    };
                    Justification::Axiom(a.axiom, inst)
                }
                "premise" => Justification::Premise(args::<PremiseArgs>(l.id, &l.args)?.index),
                "mp" => {
                    let a: MpArgs = args(l.id, &l.args)?;
                    Justification::MP {
                        antecedent: a.antecedent,
                        implication: a.implication,
                    }
                }
                "gen_g" | "gen_h" | "gen_forall" => {
                    let a: GenArgs = args(l.id, &l.args)?;
                    match (l.rule.as_str(), a.var) {
                        ("gen_g", None) => Justification::GenG(a.from),
                        ("gen_h", None) => Justification::GenH(a.from),
                        ("gen_forall", Some(x)) => Justification::GenForall(a.from, x),
                        ("gen_forall", None) => {
                            return Err(KernelError::BadArgs(format!("line {}: gen_forall needs `var`", l.id)))
                        }
                        _ => return Err(KernelError::BadArgs(format!("line {}: unexpected `var`", l.id))),
                    }
                }
                other => return Err(KernelError::UnknownRule(other.to_string())),
            };
            lines.push(ProofLine {
                id: l.id,
                formula,
                rule,
            });
        }
        let goal = r.formula(&self.goal)?;
        let delta = self
            .delta
            .as_ref()
            .map(|d| d.iter().map(|s| r.formula(s)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(ProofScript {
            logic: self.logic,
            premises,
            lines,
            goal,
            delta,
        })
    }

    pub fn from_script(script: &ProofScript) -> ScriptFile {
        let mut sig = Signature::new();
        let mut absorb = |f: &Formula| {
            if let Ok(s) = Signature::of_formula(f) {
                let _ = sig.merge(&s);
            }
        };
        script.premises.iter().for_each(&mut absorb);
        absorb(&script.goal);
        for l in &script.lines {
            absorb(&l.formula);
            if let Justification::Axiom(_, inst) = &l.rule {
                inst.phi.iter().chain(&inst.psi).for_each(&mut absorb);
                for t in inst.tau.iter().chain(&inst.tau2) {
                    absorb(&Formula::eq(t.clone(), t.clone()));
                }
            }
        }
        let lines = script
            .lines
            .iter()
            .map(|l| {
                let (rule, args) = match &l.rule {
                    Justification::Axiom(axiom, inst) => (
                        "axiom",
                        serde_json::to_value(AxiomArgs {
                            axiom: *axiom,
                            phi: inst.phi.as_ref().map(print_formula),
                            psi: inst.psi.as_ref().map(print_formula),
                            x: inst.x.clone(),
                            tau: inst.tau.as_ref().map(print_term),
                            tau2: inst.tau2.as_ref().map(print_term),
                            mask: inst.mask.clone(),
                        }),
                    ),
                    Justification::Premise(index) => ("premise", serde_json::to_value(PremiseArgs { index: *index })),
                    Justification::MP {
                        antecedent,
                        implication,
                    } => (
                        "mp",
                        serde_json::to_value(MpArgs {
                            antecedent: *antecedent,
                            implication: *implication,
                        }),
                    ),
                    Justification::GenG(from) => ("gen_g", serde_json::to_value(GenArgs { from: *from, var: None })),
                    Justification::GenH(from) => ("gen_h", serde_json::to_value(GenArgs { from: *from, var: None })),
                    Justification::GenForall(from, x) => (
                        "gen_forall",
                        serde_json::to_value(GenArgs {
                            from: *from,
                            var: Some(x.clone()),
                        }),
                    ),
                };
                LineFile {
                    id: l.id,
                    formula: print_formula(&l.formula),
                    rule: rule.to_string(),
                    args: args.expect("arguments serialize"),
                }
            })
            .collect();
        ScriptFile {
            logic: script.logic,
            premises: script.premises.iter().map(print_formula).collect(),
            signature: Some(sig),
            lines,
            goal: print_formula(&script.goal),
            delta: script.delta.as_ref().map(|d| d.iter().map(print_formula).collect()),
        }
    }
}

impl ProofScript {
    pub fn from_json(text: &str) -> Result<ProofScript, KernelError> {
        let file: ScriptFile = serde_json::from_str(text).map_err(|e| KernelError::Json(e.to_string()))?;
        file.to_script()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ScriptFile::from_script(self)).expect("scripts serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&ScriptFile::from_script(self)).expect("scripts serialize")
    }
}
