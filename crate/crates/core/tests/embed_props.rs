mod common;

use fotl::embed::{DenseEnumeration, IntervalTree, NsElement, PartialIso, RationalLine, TreePath};
use fotl::{GalaxyIndex, Rational, Theta, ThetaF64};
use num_rational::Ratio;
use proptest::prelude::*;

fn element() -> impl Strategy<Value = NsElement> {
    prop_oneof![
        (0u64..1000).prop_map(NsElement::Std),
        ((-12i64..=12), (1i64..=6), (-50i64..=50)).prop_map(|(p, q, j)| NsElement::Gal(Ratio::new(p, q), j)),
    ]
}

#[test]
fn disjoint_intervals_to_depth_eight() {
    let nodes: Vec<(TreePath, (Rational, Rational))> =
        TreePath::up_to_depth(8).map(|p| { let i = p.interval(); (p, i) }).collect();
    assert_eq!(nodes.len(), 511);
    for (i, (p, (u, v))) in nodes.iter().enumerate() {
        assert!(u < v);
        for (q, (s, t)) in &nodes[i + 1..] {
            assert!(v <= s || t <= u, "{p} and {q} overlap");
            assert_eq!(p < q, v <= s);
        }
    }
}

#[test]
fn children_lie_in_their_parent_gap() {
    for p in TreePath::up_to_depth(6) {
        let (u, v): (Rational, Rational) = p.interval();
        let (lu, lv) = p.child(fotl::embed::Step::L).interval::<Rational>();
        let (ru, rv) = p.child(fotl::embed::Step::R).interval::<Rational>();
        assert!(lv < u && v < ru);
        assert!(lu > Rational::from_integer(2.into()) && rv < Rational::from_integer(3.into()));
    }
}

#[test]
fn a_third_node_between_any_two() {
    let nodes: Vec<TreePath> = TreePath::up_to_depth(5).collect();
    for a in &nodes {
        for b in &nodes {
            if a < b {
                let c = IntervalTree.first_between(Some(a), Some(b));
                assert!(a < &c && &c < b);
            }
        }
    }
}

#[test]
fn back_and_forth_covers_prefixes() {
    let mut iso = PartialIso::new(RationalLine, IntervalTree);
    for _ in 0..600 {
        iso.step();
    }
    for x in RationalLine::iter().take(300) {
        assert!(iso.get(&x).is_some(), "{x}");
    }
    for i in 0..300 {
        assert!(iso.get_inverse(&TreePath::breadth_first(i)).is_some());
    }
    let mut pairs = iso.pairs().to_vec();
    pairs.sort();
    assert!(pairs.windows(2).all(|w| w[0].1 < w[1].1));
}

proptest! {
    #[test]
    fn theta_is_strictly_monotone(a in element(), b in element()) {
        let mut th = Theta::new();
        let (ta, tb) = (th.theta(&a), th.theta(&b));
        prop_assert_eq!(a.cmp(&b), ta.cmp(&tb));
    }

    #[test]
    fn theta_ranges(a in element()) {
        let mut th = Theta::new();
        let v = th.theta(&a);
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        match &a {
            NsElement::Std(_) => prop_assert!(zero <= v && v < one),
            NsElement::Gal(g, _) => {
                prop_assert!(two < v && v < three);
                let (u, w) = th.galaxy_interval(g);
                prop_assert!(u < v && v < w);
            }
        }
    }

    #[test]
    fn memoised_images_are_stable(g in ((-8i64..=8), (1i64..=5)), h in ((-8i64..=8), (1i64..=5))) {
        let mut th = Theta::new();
        let (g, h): (GalaxyIndex, GalaxyIndex) = (Ratio::new(g.0, g.1), Ratio::new(h.0, h.1));
        let first = th.galaxy_node(&g);
        th.galaxy_node(&h);
        prop_assert_eq!(th.galaxy_node(&g), first);
    }

    #[test]
    fn float_theta_agrees_in_order(a in element(), b in element()) {
        let mut th = ThetaF64::new();
        let (ta, tb) = (th.theta(&a), th.theta(&b));
        if a < b {
            prop_assert!(ta < tb);
        }
    }
}
