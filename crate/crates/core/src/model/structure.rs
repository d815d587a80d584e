use std::collections::BTreeMap;

use super::{ModelError, PropFamily, TruthSet, MAX_POINTS};
use crate::syntax::Signature;

/// A finite strict linear order; the order is list position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeFlow {
    points: Vec<String>,
}

impl TimeFlow {
    pub fn new(points: Vec<String>) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::EmptyFlow);
        }
        if points.len() > MAX_POINTS {
            return Err(ModelError::TooManyPoints(points.len()));
        }
        check_distinct(&points)?;
        Ok(TimeFlow { points })
    }

    /// Points named `t0, t1, …`.
    pub fn numbered(n: usize) -> Result<Self, ModelError> {
        TimeFlow::new((0..n).map(|i| format!("t{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, t: usize) -> &str {
        &self.points[t]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn precedes(&self, s: usize, t: usize) -> bool {
        s < t
    }

    pub fn full(&self) -> TruthSet {
        TruthSet::full(self.len())
    }
}

fn check_distinct(names: &[String]) -> Result<(), ModelError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(ModelError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// A total map `Uⁿ → V`, indexed in mixed radix with the first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table<V> {
    arity: usize,
    values: Vec<V>,
}

impl<V: Clone> Table<V> {
    pub fn constant(arity: usize, universe: usize, value: V) -> Self {
        Table {
            arity,
            values: vec![value; universe.pow(arity as u32)],
        }
    }

    pub fn from_fn(arity: usize, universe: usize, mut f: impl FnMut(&[usize]) -> V) -> Self {
        let values = tuples(arity, universe).map(|args| f(&args)).collect();
        Table { arity, values }
    }

    pub fn from_values(arity: usize, universe: usize, values: Vec<V>) -> Result<Self, ModelError> {
        let expected = universe.pow(arity as u32);
        if values.len() != expected {
            return Err(ModelError::BadTable(format!(
                "table of arity {arity} needs {expected} entries, got {}",
                values.len()
            )));
        }
        Ok(Table { arity, values })
    }
}

impl<V> Table<V> {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn index_of(args: &[usize], universe: usize) -> usize {
        args.iter().fold(0, |acc, &a| acc * universe + a)
    }

    pub fn get(&self, args: &[usize], universe: usize) -> &V {
        &self.values[Self::index_of(args, universe)]
    }

    pub fn set(&mut self, args: &[usize], universe: usize, value: V) {
        let i = Self::index_of(args, universe);
        self.values[i] = value;
    }
}

/// All tuples in `{0..universe}^arity` in table order.
pub fn tuples(arity: usize, universe: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = universe.pow(arity as u32);
    (0..count).map(move |mut i| {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = i % universe;
            i /= universe;
        }
        out
    })
}

/// A premodel: flow, designated family, universe and interpretation.
///
/// Elements of the universe and points of the flow are addressed by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    flow: TimeFlow,
    prop: PropFamily,
    universe: Vec<String>,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, Table<usize>>,
    predicates: BTreeMap<String, Table<TruthSet>>,
}

/// Interpretation of the non-logical symbols, used to assemble a [`Structure`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub constants: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, Table<usize>>,
    pub predicates: BTreeMap<String, Table<TruthSet>>,
}

impl Structure {
    /// A structure whose atomic truth sets lie in a closed `prop`.
    pub fn new(
        flow: TimeFlow,
        prop: PropFamily,
        universe: Vec<String>,
        interp: Interpretation,
    ) -> Result<Self, ModelError> {
        let m = Structure::premodel(flow, prop, universe, interp)?;
        if !m.prop.is_closed() {
            return Err(ModelError::PropNotClosed);
        }
        for (name, table) in &m.predicates {
            for (args, set) in tuples(table.arity, m.universe.len()).zip(&table.values) {
                if !m.prop.contains(*set) {
                    return Err(ModelError::NotAdmissible {
                        predicate: name.clone(),
                        tuple: args.iter().map(|&a| m.universe[a].clone()).collect(),
                    });
                }
            }
        }
        Ok(m)
    }

    /// A structure with `prop = ℘T`.
    pub fn standard(flow: TimeFlow, universe: Vec<String>, interp: Interpretation) -> Result<Self, ModelError> {
        let prop = PropFamily::powerset(flow.len());
        Structure::premodel(flow, prop, universe, interp)
    }

    /// Checks only shape: table sizes, value ranges, distinct names.
    /// Neither closure of `prop` nor admissibility of atoms is required.
    pub fn premodel(
        flow: TimeFlow,
        prop: PropFamily,
        universe: Vec<String>,
        interp: Interpretation,
    ) -> Result<Self, ModelError> {
        if universe.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        check_distinct(&universe)?;
        if prop.points() != flow.len() {
            return Err(ModelError::BadTable(format!(
                "prop is over {} points but the flow has {}",
                prop.points(),
                flow.len()
            )));
        }
        let u = universe.len();
        let full = flow.full();
        let Interpretation {
            constants,
            functions,
            predicates,
        } = interp;
        let mut names: Vec<String> = constants.keys().cloned().collect();
        names.extend(functions.keys().cloned());
        names.extend(predicates.keys().cloned());
        check_distinct(&names).map_err(|e| match e {
            ModelError::DuplicateName(n) => ModelError::SymbolClash(n),
            other => other,
        })?;
        for (name, &v) in &constants {
            if v >= u {
                return Err(ModelError::BadTable(format!("constant `{name}` out of range")));
            }
        }
        for (name, t) in &functions {
            if t.arity == 0 || t.values.len() != u.pow(t.arity as u32) || t.values.iter().any(|&v| v >= u) {
                return Err(ModelError::BadTable(format!("function `{name}` is malformed")));
            }
        }
        for (name, t) in &predicates {
            if t.values.len() != u.pow(t.arity as u32) || t.values.iter().any(|s| !s.is_subset(full)) {
                return Err(ModelError::BadTable(format!("predicate `{name}` is malformed")));
            }
        }
        Ok(Structure {
            flow,
            prop,
            universe,
            constants,
            functions,
            predicates,
        })
    }

    pub fn flow(&self) -> &TimeFlow {
        &self.flow
    }

    pub fn points(&self) -> usize {
        self.flow.len()
    }

    pub fn prop(&self) -> &PropFamily {
        &self.prop
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn function(&self, name: &str) -> Option<&Table<usize>> {
        self.functions.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&Table<TruthSet>> {
        self.predicates.get(name)
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<String, Table<usize>> {
        &self.functions
    }

    pub fn predicates(&self) -> &BTreeMap<String, Table<TruthSet>> {
        &self.predicates
    }

    /// `|P|(args)`.
    pub fn pred_value(&self, name: &str, args: &[usize]) -> Option<TruthSet> {
        self.predicates.get(name).map(|t| *t.get(args, self.size()))
    }

    /// `|F|(args)`.
    pub fn apply(&self, name: &str, args: &[usize]) -> Option<usize> {
        self.functions.get(name).map(|t| *t.get(args, self.size()))
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for c in self.constants.keys() {
            sig = sig.with_constant(c);
        }
        for (f, t) in &self.functions {
            sig = sig.with_function(f, t.arity);
        }
        for (p, t) in &self.predicates {
            sig = sig.with_predicate(p, t.arity);
        }
        sig
    }

    pub fn is_standard(&self) -> bool {
        self.prop.is_powerset()
    }

    /// The same structure with `prop` replaced.
    pub fn with_prop(&self, prop: PropFamily) -> Result<Self, ModelError> {
        Structure::new(
            self.flow.clone(),
            prop,
            self.universe.clone(),
            Interpretation {
                constants: self.constants.clone(),
                functions: self.functions.clone(),
                predicates: self.predicates.clone(),
            },
        )
    }

    /// Expands the signature with a fresh constant naming each element.
    ///
    /// Constant `name` is given to element `name`; fails if that clashes with
    /// an existing symbol interpreted differently.
    pub fn with_element_names(&self) -> Result<Self, ModelError> {
        let mut constants = self.constants.clone();
        for (i, e) in self.universe.iter().enumerate() {
            if self.functions.contains_key(e) || self.predicates.contains_key(e) {
                return Err(ModelError::SymbolClash(e.clone()));
            }
            match constants.get(e) {
                Some(&j) if j != i => return Err(ModelError::SymbolClash(e.clone())),
                _ => {
                    constants.insert(e.clone(), i);
                }
            }
        }
        Ok(Structure {
            constants,
            ..self.clone()
        })
    }
}
