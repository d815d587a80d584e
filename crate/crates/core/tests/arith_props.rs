mod common;

use fotl::arith::{
    arith_signature, build_window_model, check_translation, e_times, extract_uq, mu, mu_bounded, mu_conjuncts,
    ArithError, Samples,
};
use fotl::model::{find_model, Assignment, SearchBounds, Structure, TruthSet};
use fotl::random::random_standard_model;
use rand::Rng;

use common::*;

fn holds_everywhere(m: &Structure, phi: &fotl::Formula) -> bool {
    (0..m.points()).all(|t| holds(m, t, &Assignment::new(), phi))
}

#[test]
fn window_models_satisfy_bounded_mu_by_reference() {
    for n in 1..=4 {
        let m = build_window_model(n).unwrap().into_model();
        assert!(holds_everywhere(&m, mu_bounded().formula()), "N = {n}");
        assert!(!holds_everywhere(&m, mu().formula()));
    }
}

#[test]
fn rigidity_follows_from_conjunct_iv() {
    let iv = &mu_conjuncts()[3];
    let mut r = rng(30);
    let mut seen = 0;
    for _ in 0..3000 {
        let m = random_standard_model(&mut r, &arith_signature(), 3, 3);
        let somewhere = (0..m.points()).any(|t| m.satisfies(t, &Assignment::new(), iv).unwrap());
        let rigid = (0..m.size()).all(|a| {
            let q = m.pred_value("q", &[a]).unwrap();
            q.is_empty() || q == TruthSet::full(m.points())
        });
        assert_eq!(somewhere, rigid);
        seen += usize::from(somewhere);
    }
    assert!(seen > 100);
}

#[test]
fn unique_e_times_where_i_and_ii_hold() {
    let c = mu_conjuncts();
    let mut r = rng(31);
    let mut seen = 0;
    for _ in 0..5000 {
        let m = random_standard_model(&mut r, &arith_signature(), 4, 2);
        if !(m.valid_in(&c[0]).unwrap() && m.valid_in(&c[1]).unwrap()) {
            continue;
        }
        seen += 1;
        let theta = e_times(&m).unwrap();
        let mut sorted = theta.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), theta.len(), "not injective");
    }
    assert!(seen > 20);
}

#[test]
fn precedence_matches_e_times_on_windows() {
    for n in 1..=5 {
        let w = build_window_model(n).unwrap();
        let m = w.model();
        assert!(m.valid_in(&mu_conjuncts()[2]).unwrap());
        let theta = e_times(m).unwrap();
        for a in 0..m.size() {
            for b in 0..m.size() {
                let prec = m.pred_value("prec", &[a, b]).unwrap() == TruthSet::full(m.points());
                assert_eq!(prec, theta[a] < theta[b]);
            }
        }
    }
}

#[test]
fn translation_on_open_formulas() {
    for n in 1..=3 {
        let m = build_window_model(n).unwrap().into_model();
        for phi in open_formulas().iter().step_by(7) {
            let r = check_translation(phi, &m, Samples::Exhaustive).unwrap();
            assert!(r.all_agree(), "{phi}: {:?}", r.first_disagreement);
        }
    }
}

#[test]
fn translation_detects_a_broken_relativisation_target() {
    // q true at only some times is not a rigid predicate
    let w = build_window_model(2).unwrap();
    let m = w.model();
    let mut interp = fotl::model::Interpretation {
        constants: m.constants().clone(),
        functions: m.functions().clone(),
        predicates: m.predicates().clone(),
    };
    let mut q = interp.predicates["q"].clone();
    q.set(&[w.index(1).unwrap()], m.size(), TruthSet::singleton(0));
    interp.predicates.insert("q".into(), q);
    let bad = Structure::standard(m.flow().clone(), m.universe().to_vec(), interp).unwrap();
    let phi = fotl::syntax::parse_formula_infer("forall x. x = x", &[]).unwrap().0;
    assert!(matches!(
        check_translation(&phi, &bad, Samples::Exhaustive),
        Err(ArithError::NonRigid(_))
    ));
}

#[test]
fn bounded_mu_has_a_small_model_and_full_mu_none() {
    let w = find_model(mu_bounded().formula(), &SearchBounds::exhaustive(3, 3))
        .unwrap()
        .expect("window N = 1 is a model");
    assert!(holds(&w.model, w.point, &Assignment::new(), mu_bounded().formula()));
    assert!(find_model(mu().formula(), &SearchBounds::exhaustive(2, 2)).unwrap().is_none());
}

#[test]
fn random_window_sizes_give_nonnegative_carriers() {
    let mut r = rng(32);
    for _ in 0..10 {
        let n = r.gen_range(1..=8);
        let w = build_window_model(n).unwrap();
        let uq = extract_uq(w.model()).unwrap();
        let values: Vec<i64> = uq.carrier.iter().map(|&i| w.value(i)).collect();
        assert_eq!(values, (0..=n as i64).collect::<Vec<_>>());
    }
}
