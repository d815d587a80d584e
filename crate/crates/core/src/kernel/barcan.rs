//! Derivations of the Barcan formulas `∀xGφ → G∀xφ` and `∀xHφ → H∀xφ` in the
//! base logic, for an atomic `φ = p(x)`.

use super::{mirror_proof, Axiom, Instantiation, KernelError, Logic, ProofScript, ScriptBuilder};
use crate::syntax::{Formula, Term};

/// The body `p(x)` used by the shipped derivations.
pub fn barcan_body() -> Formula {
    Formula::pred("p", vec![Term::var("x")])
}

/// `∀x Gφ → G ∀x φ`.
pub fn barcan_g_formula(phi: &Formula, x: &str) -> Formula {
    Formula::forall(x, phi.clone().g()).implies(Formula::forall(x, phi.clone()).g())
}

/// A tier-L proof of `∀x Gφ → G ∀x φ`.
///
/// Outline, with `A = ∀x Gφ`:
/// `A → Gφ`, hence `PA → PGφ`; `PGφ → φ` from the mirror of `φ → GPφ`;
/// so `PA → φ`, generalise and distribute to `PA → ∀xφ` (using that `x` is
/// not free in `PA`); then `GPA → G∀xφ` and `A → GPA` give the goal.
pub fn barcan_g_script(phi: &Formula, x: &str) -> Result<ProofScript, KernelError> {
    let a = Formula::forall(x, phi.clone().g());
    let pa = a.clone().p();
    let gphi = phi.clone().g();
    let mut b = ScriptBuilder::new();

    // A → Gφ, lifted to PA → PGφ
    let inst = b.axiom(
        Axiom::UnivInst,
        Instantiation::new().phi(gphi.clone()).x(x).tau(Term::var(x)),
    )?;
    let contra = b.contrapose(inst)?;
    let boxed = b.gen_h(contra);
    let k = b.axiom(
        Axiom::KH,
        Instantiation::new().phi(gphi.clone().not()).psi(a.clone().not()),
    )?;
    let hk = b.mp(boxed, k)?;
    let pa_pg = b.contrapose(hk)?;

    // PGφ → φ
    let hf = b.axiom(Axiom::HF, Instantiation::new().phi(phi.clone().not()))?;
    let dn = b.taut(phi.clone().implies(phi.clone().not().not()));
    let gdn = b.gen_g(dn);
    let kg = b.axiom(
        Axiom::KG,
        Instantiation::new().phi(phi.clone()).psi(phi.clone().not().not()),
    )?;
    let g_dn = b.mp(gdn, kg)?;
    let g_dn_contra = b.contrapose(g_dn)?;
    let h_step = b.gen_h(g_dn_contra);
    let kh = b.axiom(
        Axiom::KH,
        Instantiation::new()
            .phi(phi.clone().not().not().g().not())
            .psi(gphi.clone().not()),
    )?;
    let h_imp = b.mp(h_step, kh)?;
    // ¬φ → HF¬φ, where HF¬φ unfolds to H¬G¬¬φ
    let hf_unfolded = b.taut(
        b.formula(hf)
            .clone()
            .implies(phi.clone().not().implies(phi.clone().not().not().g().not().h())),
    );
    let hf_core = b.mp(hf, hf_unfolded)?;
    let not_phi = b.chain(hf_core, h_imp)?;
    let pg_phi = b.taut(
        b.formula(not_phi)
            .clone()
            .implies(gphi.clone().not().h().not().implies(phi.clone())),
    );
    let pg_phi = b.mp(not_phi, pg_phi)?;
    // restate ¬H¬Gφ as PGφ so the chain below matches syntactically
    let restate = b.taut(
        b.formula(pg_phi)
            .clone()
            .implies(gphi.clone().p().implies(phi.clone())),
    );
    let pg_phi = b.mp(pg_phi, restate)?;
    let restate = b.taut(
        b.formula(pa_pg)
            .clone()
            .implies(pa.clone().implies(gphi.clone().p())),
    );
    let pa_pg = b.mp(pa_pg, restate)?;

    // PA → φ, then PA → ∀xφ
    let pa_phi = b.chain(pa_pg, pg_phi)?;
    let all = b.gen_forall(pa_phi, x);
    let dist = b.axiom(
        Axiom::UnivDist,
        Instantiation::new().phi(pa.clone()).psi(phi.clone()).x(x),
    )?;
    let all_pa = b.mp(all, dist)?;
    let vac = b.axiom(Axiom::VacQuant, Instantiation::new().phi(pa.clone()).x(x))?;
    let pa_all = b.chain(vac, all_pa)?;

    // GPA → G∀xφ and A → GPA
    let g = b.gen_g(pa_all);
    let kg = b.axiom(
        Axiom::KG,
        Instantiation::new().phi(pa.clone()).psi(Formula::forall(x, phi.clone())),
    )?;
    let gpa = b.mp(g, kg)?;
    let gp = b.axiom(Axiom::GP, Instantiation::new().phi(a))?;
    b.chain(gp, gpa)?;

    Ok(b.finish(Logic::L, barcan_g_formula(phi, x)))
}

/// A tier-L proof of `∀x Hφ → H ∀x φ`, the mirror of [`barcan_g_script`].
pub fn barcan_h_script(phi: &Formula, x: &str) -> Result<ProofScript, KernelError> {
    Ok(mirror_proof(&barcan_g_script(&phi.mirror(), x)?))
}
