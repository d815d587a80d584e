use std::collections::BTreeSet;

/// An individual term: a variable, a constant, or a function application.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(function: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(function.into(), args)
    }

    /// The arithmetic zero constant `0`.
    pub fn zero() -> Self {
        Term::Const("0".into())
    }

    pub fn succ(self) -> Self {
        Term::App("succ".into(), vec![self])
    }

    pub fn plus(self, rhs: Term) -> Self {
        Term::App("+".into(), vec![self, rhs])
    }

    pub fn times(self, rhs: Term) -> Self {
        Term::App("*".into(), vec![self, rhs])
    }

    /// Variables occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn has_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.has_var(name)),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    /// Nesting depth of function applications; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replace every occurrence of the variable `name` by `replacement`.
    pub fn substitute(&self, name: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == name => replacement.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute(name, replacement)).collect(),
            ),
        }
    }

    /// Number of occurrences of `target` as a subterm, counted in preorder
    /// without descending into a matched occurrence.
    pub fn count_occurrences(&self, target: &Term) -> usize {
        if self == target {
            return 1;
        }
        match self {
            Term::App(_, args) => args.iter().map(|a| a.count_occurrences(target)).sum(),
            _ => 0,
        }
    }

    /// Replace the occurrences of `target` whose preorder index satisfies `selected`.
    /// `counter` carries the running occurrence index across sibling terms.
    pub(crate) fn replace_occurrences(
        &self,
        target: &Term,
        replacement: &Term,
        selected: &dyn Fn(usize) -> bool,
        counter: &mut usize,
    ) -> Term {
        if self == target {
            let idx = *counter;
            *counter += 1;
            return if selected(idx) {
                replacement.clone()
            } else {
                self.clone()
            };
        }
        match self {
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter()
                    .map(|a| a.replace_occurrences(target, replacement, selected, counter))
                    .collect(),
            ),
            _ => self.clone(),
        }
    }
}
