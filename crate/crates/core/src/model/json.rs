//! Model files.
//!
//! ```json
//! {
//!   "flow": ["t0", "t1", "t2"],
//!   "prop": "powerset",
//!   "universe": ["a", "b"],
//!   "constants": {"c": "a"},
//!   "functions": {"f": {"a": "b", "b": "a"}},
//!   "predicates": {"p": {"a": ["t2"], "b": []}, "r": {"a,b": ["t0"]}},
//!   "arities": {"p": 1, "r": 2}
//! }
//! ```
//!
//! `prop` is either `"powerset"` or a list of point lists. Predicate tuples
//! not listed are false everywhere; a nullary predicate uses the key `""`.
//! Function tables must be total. `arities` is only needed for predicates
//! whose table is empty.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{tuples, Interpretation, ModelError, PropFamily, Structure, Table, TimeFlow, TruthSet};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropSpec {
    Named(String),
    Sets(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub flow: Vec<String>,
    pub prop: PropSpec,
    pub universe: Vec<String>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default)]
    pub functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub predicates: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arities: BTreeMap<String, usize>,
}

fn split_key(key: &str) -> Vec<&str> {
    if key.trim().is_empty() {
        Vec::new()
    } else {
        key.split(',').map(str::trim).collect()
    }
}

impl ModelFile {
    /// Builds the structure, checking the admissibility conditions unless
    /// `premodel` is set.
    pub fn to_structure(&self, premodel: bool) -> Result<Structure, ModelError> {
        let flow = TimeFlow::new(self.flow.clone())?;
        let point = |name: &str| flow.position(name).ok_or_else(|| ModelError::UnknownPoint(name.to_string()));
        let set = |names: &[String]| -> Result<TruthSet, ModelError> {
            names.iter().try_fold(TruthSet::EMPTY, |s, n| Ok(s.with(point(n)?)))
        };
        let prop = match &self.prop {
            PropSpec::Named(n) if n == "powerset" => PropFamily::powerset(flow.len()),
            PropSpec::Named(other) => return Err(ModelError::Json(format!("unknown prop `{other}`"))),
            PropSpec::Sets(sets) => PropFamily::from_sets(
                flow.len(),
                sets.iter().map(|s| set(s)).collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let u = self.universe.len();
        let elem = |name: &str| {
            self.universe
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| ModelError::UnknownElement(name.to_string()))
        };
        let elems = |key: &str| split_key(key).into_iter().map(elem).collect::<Result<Vec<_>, _>>();

        let mut interp = Interpretation::default();
        for (c, v) in &self.constants {
            interp.constants.insert(c.clone(), elem(v)?);
        }
        for (f, entries) in &self.functions {
            let arity = match self.arities.get(f) {
                Some(&a) => a,
                None => entries
                    .keys()
                    .next()
                    .map(|k| split_key(k).len())
                    .ok_or_else(|| ModelError::BadTable(format!("function `{f}` has no entries")))?,
            };
            let mut values = vec![None; u.pow(arity as u32)];
            for (key, v) in entries {
                let args = elems(key)?;
                if args.len() != arity {
                    return Err(ModelError::BadTable(format!("function `{f}`: key `{key}` has wrong arity")));
                }
                values[Table::<usize>::index_of(&args, u)] = Some(elem(v)?);
            }
            let values = values
                .into_iter()
                .zip(tuples(arity, u))
                .map(|(v, args)| {
                    v.ok_or_else(|| {
                        let names: Vec<_> = args.iter().map(|&a| self.universe[a].as_str()).collect();
                        ModelError::BadTable(format!("function `{f}` undefined at ({})", names.join(",")))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            interp.functions.insert(f.clone(), Table::from_values(arity, u, values)?);
        }
        for (p, entries) in &self.predicates {
            let arity = match self.arities.get(p) {
                Some(&a) => a,
                None => entries
                    .keys()
                    .next()
                    .map(|k| split_key(k).len())
                    .ok_or_else(|| ModelError::BadTable(format!("predicate `{p}` needs an arity")))?,
            };
            let mut table = Table::constant(arity, u, TruthSet::EMPTY);
            for (key, points) in entries {
                let args = elems(key)?;
                if args.len() != arity {
                    return Err(ModelError::BadTable(format!("predicate `{p}`: key `{key}` has wrong arity")));
                }
                table.set(&args, u, set(points)?);
            }
            interp.predicates.insert(p.clone(), table);
        }
        if premodel {
            Structure::premodel(flow, prop, self.universe.clone(), interp)
        } else {
            Structure::new(flow, prop, self.universe.clone(), interp)
        }
    }

    pub fn from_structure(m: &Structure) -> Self {
        let flow = m.flow();
        let points = |s: TruthSet| s.points().map(|t| flow.name(t).to_string()).collect::<Vec<_>>();
        let universe = m.universe().to_vec();
        let key = |args: &[usize]| args.iter().map(|&a| universe[a].as_str()).collect::<Vec<_>>().join(",");
        let prop = if m.is_standard() {
            PropSpec::Named("powerset".into())
        } else {
            PropSpec::Sets(m.prop().members().map(points).collect())
        };
        let constants = m
            .constants()
            .iter()
            .map(|(c, &v)| (c.clone(), universe[v].clone()))
            .collect();
        let functions = m
            .functions()
            .iter()
            .map(|(f, t)| {
                let entries = tuples(t.arity(), m.size())
                    .zip(t.values())
                    .map(|(args, &v)| (key(&args), universe[v].clone()))
                    .collect();
                (f.clone(), entries)
            })
            .collect();
        let predicates = m
            .predicates()
            .iter()
            .map(|(p, t)| {
                let entries = tuples(t.arity(), m.size())
                    .zip(t.values())
                    .filter(|(_, s)| !s.is_empty())
                    .map(|(args, &s)| (key(&args), points(s)))
                    .collect();
                (p.clone(), entries)
            })
            .collect();
        let arities = m
            .predicates()
            .iter()
            .map(|(p, t)| (p.clone(), t.arity()))
            .chain(m.functions().iter().map(|(f, t)| (f.clone(), t.arity())))
            .collect();
        ModelFile {
            flow: flow.names().to_vec(),
            prop,
            universe,
            constants,
            functions,
            predicates,
            arities,
        }
    }
}

impl Structure {
    pub fn from_json(text: &str) -> Result<Structure, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        file.to_structure(false)
    }

    /// Reads a model file without requiring closure or admissible atoms.
    pub fn premodel_from_json(text: &str) -> Result<Structure, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        file.to_structure(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModelFile::from_structure(self)).expect("model files serialize")
    }
}
