use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Formula, SyntaxError, Term};

/// Non-logical symbols of a first-order language.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub constants: BTreeSet<String>,
    #[serde(default)]
    pub functions: BTreeMap<String, usize>,
    #[serde(default)]
    pub predicates: BTreeMap<String, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function(usize),
    Predicate(usize),
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.insert(name.to_string());
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else if let Some(&a) = self.functions.get(name) {
            Some(SymbolKind::Function(a))
        } else {
            self.predicates.get(name).map(|&a| SymbolKind::Predicate(a))
        }
    }

    /// Names pairwise distinct across kinds; function arities at least one.
    pub fn check(&self) -> Result<(), SyntaxError> {
        for name in &self.constants {
            if self.functions.contains_key(name) || self.predicates.contains_key(name) {
                return Err(SyntaxError::SymbolClash(name.clone()));
            }
        }
        for (name, &arity) in &self.functions {
            if self.predicates.contains_key(name) {
                return Err(SyntaxError::SymbolClash(name.clone()));
            }
            if arity == 0 {
                return Err(SyntaxError::ArityMismatch {
                    symbol: name.clone(),
                    expected: 1,
                    found: 0,
                });
            }
        }
        Ok(())
    }

    /// Add the symbols of `other`, failing on conflicting declarations.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SyntaxError> {
        for c in &other.constants {
            self.declare(c, SymbolKind::Constant)?;
        }
        for (f, &a) in &other.functions {
            self.declare(f, SymbolKind::Function(a))?;
        }
        for (p, &a) in &other.predicates {
            self.declare(p, SymbolKind::Predicate(a))?;
        }
        Ok(())
    }

    pub(crate) fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<(), SyntaxError> {
        match (self.kind(name), kind) {
            (None, SymbolKind::Constant) => {
                self.constants.insert(name.to_string());
            }
            (None, SymbolKind::Function(a)) => {
                self.functions.insert(name.to_string(), a);
            }
            (None, SymbolKind::Predicate(a)) => {
                self.predicates.insert(name.to_string(), a);
            }
            (Some(old), new) if old == new => {}
            (Some(SymbolKind::Function(e)), SymbolKind::Function(f))
            | (Some(SymbolKind::Predicate(e)), SymbolKind::Predicate(f)) => {
                return Err(SyntaxError::ArityMismatch {
                    symbol: name.to_string(),
                    expected: e,
                    found: f,
                })
            }
            _ => return Err(SyntaxError::SymbolClash(name.to_string())),
        }
        Ok(())
    }

    pub fn check_term(&self, term: &Term) -> Result<(), SyntaxError> {
        match term {
            Term::Var(v) => match self.kind(v) {
                None => Ok(()),
                Some(_) => Err(SyntaxError::SymbolClash(v.clone())),
            },
            Term::Const(c) => match self.kind(c) {
                Some(SymbolKind::Constant) => Ok(()),
                _ => Err(SyntaxError::UnknownSymbol(c.clone())),
            },
            Term::App(f, args) => match self.kind(f) {
                Some(SymbolKind::Function(a)) if a == args.len() => {
                    args.iter().try_for_each(|t| self.check_term(t))
                }
                Some(SymbolKind::Function(a)) => Err(SyntaxError::ArityMismatch {
                    symbol: f.clone(),
                    expected: a,
                    found: args.len(),
                }),
                _ => Err(SyntaxError::UnknownSymbol(f.clone())),
            },
        }
    }

    /// Check that every symbol of `formula` is declared with the right arity.
    pub fn check_formula(&self, formula: &Formula) -> Result<(), SyntaxError> {
        for sub in formula.subformulas() {
            match sub {
                Formula::Pred(p, args) => match self.kind(p) {
                    Some(SymbolKind::Predicate(a)) if a == args.len() => {}
                    Some(SymbolKind::Predicate(a)) => {
                        return Err(SyntaxError::ArityMismatch {
                            symbol: p.clone(),
                            expected: a,
                            found: args.len(),
                        })
                    }
                    _ => return Err(SyntaxError::UnknownSymbol(p.clone())),
                },
                Formula::Eq(..) => {}
                _ => {
                    if let Some(x) = sub.bound_var() {
                        if self.kind(x).is_some() {
                            return Err(SyntaxError::SymbolClash(x.to_string()));
                        }
                    }
                }
            }
        }
        formula.terms().into_iter().try_for_each(|t| self.check_term(t))
    }

    /// The smallest signature declaring every symbol used in `formula`.
    pub fn of_formula(formula: &Formula) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        sig.absorb(formula)?;
        Ok(sig)
    }

    pub(crate) fn absorb(&mut self, formula: &Formula) -> Result<(), SyntaxError> {
        fn absorb_term(sig: &mut Signature, t: &Term) -> Result<(), SyntaxError> {
            match t {
                Term::Var(_) => Ok(()),
                Term::Const(c) => sig.declare(c, SymbolKind::Constant),
                Term::App(f, args) => {
                    sig.declare(f, SymbolKind::Function(args.len()))?;
                    args.iter().try_for_each(|a| absorb_term(sig, a))
                }
            }
        }
        for sub in formula.subformulas() {
            if let Formula::Pred(p, args) = sub {
                self.declare(p, SymbolKind::Predicate(args.len()))?;
            }
        }
        for t in formula.terms() {
            absorb_term(self, t)?;
        }
        Ok(())
    }
}
