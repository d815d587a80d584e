use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{KernelError, Logic};
use crate::syntax::{Formula, Term};

/// Largest number of propositional atoms a tautology check will tabulate.
pub const MAX_TAUT_ATOMS: usize = 20;

/// Frames on which every instance of a scheme is valid (test metadata only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameClass {
    AllFiniteLinear,
    DenseOnly,
    EndlessOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Taut,
    UnivInst,
    UnivDist,
    VacQuant,
    SelfId,
    SubstId,
    RigidId,
    KG,
    KH,
    GP,
    HF,
    TransG,
    TransH,
    LinFut,
    LinPast,
    EndlessG,
    EndlessH,
    DenseG,
    DenseH,
    DedekindCty,
    DedekindCtyMirror,
}

/// Metavariables a scheme can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Meta {
    Phi,
    Psi,
    X,
    Tau,
    Tau2,
    Mask,
}

impl Meta {
    pub fn name(self) -> &'static str {
        match self {
            Meta::Phi => "phi",
            Meta::Psi => "psi",
            Meta::X => "x",
            Meta::Tau => "tau",
            Meta::Tau2 => "tau2",
            Meta::Mask => "mask",
        }
    }
}

impl Axiom {
    pub const ALL: [Axiom; 21] = [
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
        Axiom::TransG,
        Axiom::TransH,
        Axiom::LinFut,
        Axiom::LinPast,
        Axiom::EndlessG,
        Axiom::EndlessH,
        Axiom::DenseG,
        Axiom::DenseH,
        Axiom::DedekindCty,
        Axiom::DedekindCtyMirror,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Taut => "Taut",
            Axiom::UnivInst => "UnivInst",
            Axiom::UnivDist => "UnivDist",
            Axiom::VacQuant => "VacQuant",
            Axiom::SelfId => "SelfId",
            Axiom::SubstId => "SubstId",
            Axiom::RigidId => "RigidId",
            Axiom::KG => "K_G",
            Axiom::KH => "K_H",
            Axiom::GP => "GP",
            Axiom::HF => "HF",
            Axiom::TransG => "Trans_G",
            Axiom::TransH => "Trans_H",
            Axiom::LinFut => "LinFut",
            Axiom::LinPast => "LinPast",
            Axiom::EndlessG => "Endless_G",
            Axiom::EndlessH => "Endless_H",
            Axiom::DenseG => "Dense_G",
            Axiom::DenseH => "Dense_H",
            Axiom::DedekindCty => "DedekindCty",
            Axiom::DedekindCtyMirror => "DedekindCtyMirror",
        }
    }

    pub fn tier(self) -> Logic {
        use Axiom::*;
        match self {
            Taut | UnivInst | UnivDist | VacQuant | SelfId | SubstId | RigidId | KG | KH | GP
            | HF => Logic::L,
            TransG | TransH | LinFut | LinPast | EndlessG | EndlessH | DenseG | DenseH => Logic::LQ,
            DedekindCty | DedekindCtyMirror => Logic::LR,
        }
    }

    pub fn frame_class(self) -> FrameClass {
        match self {
            Axiom::DenseG | Axiom::DenseH => FrameClass::DenseOnly,
            Axiom::EndlessG | Axiom::EndlessH => FrameClass::EndlessOnly,
            _ => FrameClass::AllFiniteLinear,
        }
    }

    pub fn mirror(self) -> Axiom {
        use Axiom::*;
        match self {
            KG => KH,
            KH => KG,
            GP => HF,
            HF => GP,
            TransG => TransH,
            TransH => TransG,
            LinFut => LinPast,
            LinPast => LinFut,
            EndlessG => EndlessH,
            EndlessH => EndlessG,
            DenseG => DenseH,
            DenseH => DenseG,
            DedekindCty => DedekindCtyMirror,
            DedekindCtyMirror => DedekindCty,
            other => other,
        }
    }

    /// Metavariables the scheme requires, in order.
    pub fn metavariables(self) -> &'static [Meta] {
        use Axiom::*;
        match self {
            Taut => &[],
            UnivInst => &[Meta::Phi, Meta::X, Meta::Tau],
            UnivDist => &[Meta::Phi, Meta::Psi, Meta::X],
            VacQuant => &[Meta::Phi, Meta::X],
            SelfId => &[Meta::Tau],
            SubstId => &[Meta::Phi, Meta::Tau, Meta::Tau2, Meta::Mask],
            RigidId => &[Meta::Tau, Meta::Tau2],
            KG | KH | LinFut | LinPast => &[Meta::Phi, Meta::Psi],
            _ => &[Meta::Phi],
        }
    }

    /// Builds the instance from `inst`, checking side conditions.
    pub fn instance(self, inst: &Instantiation) -> Result<Formula, InstanceError> {
        use Axiom::*;
        self.check_metavariables(inst)?;
        let phi = || inst.phi.clone().unwrap();
        let psi = || inst.psi.clone().unwrap();
        let x = || inst.x.clone().unwrap();
        let tau = || inst.tau.clone().unwrap();
        let tau2 = || inst.tau2.clone().unwrap();
        Ok(match self {
            Taut => {
                return Err(InstanceError::Malformed(KernelError::BadArgs(
                    "Taut has no scheme to instantiate".into(),
                )))
            }
            UnivInst => {
                let (phi, x, tau) = (phi(), x(), tau());
                if !phi.free_for(&tau, &x) {
                    return Err(InstanceError::SideCondition(format!(
                        "`{tau}` is not free for `{x}` in `{phi}`"
                    )));
                }
                let inst = phi.substitute(&x, &tau).map_err(|e| InstanceError::SideCondition(e.to_string()))?;
                Formula::forall(x, phi).implies(inst)
            }
            UnivDist => {
                let (phi, psi, x) = (phi(), psi(), x());
                Formula::forall(x.clone(), phi.clone().implies(psi.clone()))
                    .implies(Formula::forall(x.clone(), phi).implies(Formula::forall(x, psi)))
            }
            VacQuant => {
                let (phi, x) = (phi(), x());
                if phi.is_free(&x) {
                    return Err(InstanceError::SideCondition(format!("`{x}` is free in `{phi}`")));
                }
                phi.clone().implies(Formula::forall(x, phi))
            }
            SelfId => Formula::eq(tau(), tau()),
            SubstId => {
                let phi = phi();
                if !phi.is_atomic() {
                    return Err(InstanceError::SideCondition(format!("`{phi}` is not atomic")));
                }
                let mask = inst.mask.clone().unwrap();
                let replaced = phi
                    .partial_replace(&tau(), &tau2(), &mask)
                    .map_err(|e| InstanceError::SideCondition(e.to_string()))?;
                Formula::eq(tau(), tau2()).implies(phi.implies(replaced))
            }
            RigidId => Formula::eq(tau(), tau2()).implies(Formula::eq(tau(), tau2()).always()),
            KG => phi().implies(psi()).g().implies(phi().g().implies(psi().g())),
            KH => phi().implies(psi()).h().implies(phi().h().implies(psi().h())),
            GP => phi().implies(phi().p().g()),
            HF => phi().implies(phi().f().h()),
            TransG => phi().g().implies(phi().g().g()),
            TransH => phi().h().implies(phi().h().h()),
            LinFut => linear(phi(), psi(), Formula::f),
            LinPast => linear(phi(), psi(), Formula::p),
            EndlessG => phi().g().implies(phi().f()),
            EndlessH => phi().h().implies(phi().p()),
            DenseG => phi().g().g().implies(phi().g()),
            DenseH => phi().h().h().implies(phi().h()),
            DedekindCty => phi()
                .g()
                .implies(phi().g().p())
                .always()
                .implies(phi().g().implies(phi().h())),
            DedekindCtyMirror => phi()
                .h()
                .implies(phi().h().f())
                .always()
                .implies(phi().h().implies(phi().g())),
        })
    }

    fn check_metavariables(self, inst: &Instantiation) -> Result<(), InstanceError> {
        let wanted = self.metavariables();
        for m in inst.present() {
            if !wanted.contains(&m) {
                return Err(InstanceError::Malformed(KernelError::UnexpectedMetavariable {
                    axiom: self.name().into(),
                    name: m.name().into(),
                }));
            }
        }
        for &m in wanted {
            if !inst.present().contains(&m) {
                return Err(InstanceError::Malformed(KernelError::MissingMetavariable {
                    axiom: self.name().into(),
                    name: m.name().into(),
                }));
            }
        }
        Ok(())
    }
}

/// `Fφ ∧ Fψ → F(φ∧ψ) ∨ F(φ∧Fψ) ∨ F(Fφ∧ψ)` with `F` replaced by `op`.
fn linear(phi: Formula, psi: Formula, op: fn(Formula) -> Formula) -> Formula {
    let lhs = op(phi.clone()).and(op(psi.clone()));
    let rhs = op(phi.clone().and(psi.clone()))
        .or(op(phi.clone().and(op(psi.clone()))))
        .or(op(op(phi).and(psi)));
    lhs.implies(rhs)
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| KernelError::UnknownAxiom(s.to_string()))
    }
}

impl Serialize for Axiom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Axiom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Explicit values for a scheme's metavariables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instantiation {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub x: Option<String>,
    pub tau: Option<Term>,
    pub tau2: Option<Term>,
    /// Occurrences of `tau` (preorder, from 0) replaced by `tau2`.
    pub mask: Option<BTreeSet<usize>>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phi(mut self, phi: Formula) -> Self {
        self.phi = Some(phi);
        self
    }

    pub fn psi(mut self, psi: Formula) -> Self {
        self.psi = Some(psi);
        self
    }

    pub fn x(mut self, x: impl Into<String>) -> Self {
        self.x = Some(x.into());
        self
    }

    pub fn tau(mut self, tau: Term) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn tau2(mut self, tau2: Term) -> Self {
        self.tau2 = Some(tau2);
        self
    }

    pub fn mask(mut self, mask: impl IntoIterator<Item = usize>) -> Self {
        self.mask = Some(mask.into_iter().collect());
        self
    }

    pub fn present(&self) -> Vec<Meta> {
        let mut out = Vec::new();
        if self.phi.is_some() {
            out.push(Meta::Phi);
        }
        if self.psi.is_some() {
            out.push(Meta::Psi);
        }
        if self.x.is_some() {
            out.push(Meta::X);
        }
        if self.tau.is_some() {
            out.push(Meta::Tau);
        }
        if self.tau2.is_some() {
            out.push(Meta::Tau2);
        }
        if self.mask.is_some() {
            out.push(Meta::Mask);
        }
        out
    }

    /// Formula metavariables mirrored; terms and variables unchanged.
    pub fn mirror(&self) -> Instantiation {
        Instantiation {
            phi: self.phi.as_ref().map(Formula::mirror),
            psi: self.psi.as_ref().map(Formula::mirror),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    SideCondition(String),
    Malformed(KernelError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomMatch {
    Matches,
    /// The candidate differs from the instance (absent for `Taut`).
    Mismatch { expected: Option<Formula> },
    SideConditionViolated(String),
}

impl AxiomMatch {
    pub fn is_match(&self) -> bool {
        matches!(self, AxiomMatch::Matches)
    }
}

/// Checks `candidate` against the instance of `axiom` under `inst`.
///
/// Comparison is syntactic after expanding abbreviations.
pub fn match_axiom(axiom: Axiom, inst: &Instantiation, candidate: &Formula) -> Result<AxiomMatch, KernelError> {
    if axiom == Axiom::Taut {
        if !inst.present().is_empty() {
            return Err(KernelError::UnexpectedMetavariable {
                axiom: "Taut".into(),
                name: inst.present()[0].name().into(),
            });
        }
        return Ok(if is_tautology_instance(candidate)? {
            AxiomMatch::Matches
        } else {
            AxiomMatch::Mismatch { expected: None }
        });
    }
    match axiom.instance(inst) {
        Ok(expected) if expected.normalize() == candidate.normalize() => Ok(AxiomMatch::Matches),
        Ok(expected) => Ok(AxiomMatch::Mismatch {
            expected: Some(expected),
        }),
        Err(InstanceError::SideCondition(msg)) => Ok(AxiomMatch::SideConditionViolated(msg)),
        Err(InstanceError::Malformed(e)) => Err(e),
    }
}

/// Boolean skeleton over numbered atoms.
enum Skel {
    Atom(usize),
    Not(Box<Skel>),
    And(Box<Skel>, Box<Skel>),
}

fn skeleton(f: &Formula, atoms: &mut BTreeMap<Formula, usize>) -> Skel {
    match f {
        Formula::Not(a) => Skel::Not(Box::new(skeleton(a, atoms))),
        Formula::And(a, b) => Skel::And(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        other => {
            let next = atoms.len();
            Skel::Atom(*atoms.entry(other.clone()).or_insert(next))
        }
    }
}

impl Skel {
    /// Evaluates 64 valuations at once; bit `r` of `vals[i]` is atom `i` in row `r`.
    fn eval(&self, vals: &[u64]) -> u64 {
        match self {
            Skel::Atom(i) => vals[*i],
            Skel::Not(a) => !a.eval(vals),
            Skel::And(a, b) => a.eval(vals) & b.eval(vals),
        }
    }
}

/// True iff `φ` is a substitution instance of a propositional tautology,
/// with maximal non-Boolean subformulas (after expanding abbreviations)
/// read as atoms.
pub fn is_tautology_instance(phi: &Formula) -> Result<bool, KernelError> {
    let mut atoms = BTreeMap::new();
    let skel = skeleton(&phi.normalize(), &mut atoms);
    let k = atoms.len();
    if k > MAX_TAUT_ATOMS {
        return Err(KernelError::TooManyAtoms(k));
    }
    // low six atoms vary within a 64-row word, the rest across words
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let rows = 1u64 << k;
    let live = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let words = if k > 6 { 1u64 << (k - 6) } else { 1 };
    let mut vals = vec![0u64; k];
    for w in 0..words {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = if i < 6 {
                PATTERNS[i]
            } else if w >> (i - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if !skel.eval(&vals) & live != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_infer;

    fn f(src: &str) -> Formula {
        parse_formula_infer(src, &["c", "d"]).unwrap().0
    }

    /// Row-by-row truth table, independent of the word-parallel evaluator.
    fn slow_taut(phi: &Formula) -> bool {
        fn ev(f: &Formula, atoms: &BTreeMap<Formula, usize>, row: u64) -> bool {
            match f {
                Formula::Not(a) => !ev(a, atoms, row),
                Formula::And(a, b) => ev(a, atoms, row) && ev(b, atoms, row),
                other => row >> atoms[other] & 1 == 1,
            }
        }
        let core = phi.normalize();
        let mut atoms = BTreeMap::new();
        skeleton(&core, &mut atoms);
        (0..1u64 << atoms.len()).all(|row| ev(&core, &atoms, row))
    }

    #[test]
    fn tautology_examples() {
        assert!(is_tautology_instance(&f("G p() -> G p()")).unwrap());
        assert!(is_tautology_instance(&f("G p() | ~G p()")).unwrap());
        assert!(!is_tautology_instance(&f("G (p() -> p())")).unwrap());
        assert!(!slow_taut(&f("G (p() -> p())")));
        // F is ¬G¬ by definition
        assert!(is_tautology_instance(&f("F p() <-> ~G ~p()")).unwrap());
    }

    #[test]
    fn wide_tautologies_agree_with_row_oracle() {
        let names: Vec<String> = (0..9).map(|i| format!("a{i}()")).collect();
        let disj = names.join(" | ");
        let src = format!("({disj}) | ~({})", names.join(" | "));
        assert!(is_tautology_instance(&f(&src)).unwrap());
        assert!(slow_taut(&f(&src)));
        let src = format!("({}) -> a0()", names.join(" | "));
        assert!(!is_tautology_instance(&f(&src)).unwrap());
        assert!(!slow_taut(&f(&src)));
    }

    #[test]
    fn atom_cap() {
        let wide: Vec<String> = (0..21).map(|i| format!("a{i}()")).collect();
        let src = wide.join(" & ");
        assert_eq!(is_tautology_instance(&f(&src)), Err(KernelError::TooManyAtoms(21)));
    }

    #[test]
    fn scheme_examples() {
        let k = Instantiation::new().phi(f("p()")).psi(f("q()"));
        let m = match_axiom(Axiom::KG, &k, &f("G (p() -> q()) -> (G p() -> G q())")).unwrap();
        assert!(m.is_match());
        let vq = Instantiation::new().phi(f("p(x)")).x("x");
        let m = match_axiom(Axiom::VacQuant, &vq, &f("p(x) -> forall x. p(x)")).unwrap();
        assert!(matches!(m, AxiomMatch::SideConditionViolated(_)));
        let rigid = Instantiation::new()
            .tau(Term::constant("c"))
            .tau2(Term::constant("d"));
        let m = match_axiom(Axiom::RigidId, &rigid, &f("c = d -> box (c = d)")).unwrap();
        assert!(m.is_match());
    }

    #[test]
    fn instantiation_and_identity() {
        let ui = Instantiation::new().phi(f("forall y. r(x, y)")).x("x").tau(Term::var("y"));
        assert!(matches!(
            Axiom::UnivInst.instance(&ui),
            Err(InstanceError::SideCondition(_))
        ));
        let ui = Instantiation::new().phi(f("r(x, y)")).x("x").tau(Term::constant("c"));
        assert_eq!(
            Axiom::UnivInst.instance(&ui).unwrap(),
            f("(forall x. r(x, y)) -> r(c, y)")
        );
        let si = Instantiation::new()
            .phi(f("r(c, c)"))
            .tau(Term::constant("c"))
            .tau2(Term::constant("d"))
            .mask([1]);
        assert_eq!(
            Axiom::SubstId.instance(&si).unwrap(),
            f("c = d -> (r(c, c) -> r(c, d))")
        );
        let missing = Instantiation::new().phi(f("p()"));
        assert!(matches!(
            match_axiom(Axiom::KG, &missing, &f("p()")),
            Err(KernelError::MissingMetavariable { .. })
        ));
    }

    #[test]
    fn mirror_partners() {
        for a in Axiom::ALL {
            assert_eq!(a.mirror().mirror(), a);
            assert_eq!(a.mirror().tier(), a.tier());
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        let inst = Instantiation::new().phi(f("G p()"));
        let g = Axiom::DedekindCty.instance(&inst).unwrap();
        let h = Axiom::DedekindCtyMirror.instance(&inst.mirror()).unwrap();
        assert_eq!(g.mirror(), h);
    }
}
