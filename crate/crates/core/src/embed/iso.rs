use std::collections::BTreeMap;
use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;

/// A countable dense order without endpoints, listed as `nth(0), nth(1), …`.
pub trait DenseEnumeration {
    type Item: Clone + Ord + Debug;

    fn elements(&self) -> Box<dyn Iterator<Item = Self::Item> + '_>;

    fn nth(&self, i: usize) -> Self::Item {
        self.elements().nth(i).expect("enumeration is infinite")
    }

    /// The first enumerated element strictly between the bounds.
    fn first_between(&self, lo: Option<&Self::Item>, hi: Option<&Self::Item>) -> Self::Item {
        self.elements()
            .find(|x| lo.is_none_or(|l| x > l) && hi.is_none_or(|h| x < h))
            .expect("order is dense and unbounded")
    }
}

/// The rationals `p/q` in lowest terms, by increasing `|p| + q`, each
/// positive value followed by its negative.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalLine;

impl RationalLine {
    pub fn iter() -> impl Iterator<Item = Ratio<i64>> {
        std::iter::once(Ratio::from_integer(0)).chain((2i64..).flat_map(|h| {
            (1..h).filter(move |p| p.gcd(&(h - p)) == 1).flat_map(move |p| {
                let r = Ratio::new_raw(p, h - p);
                [r, -r]
            })
        }))
    }
}

impl DenseEnumeration for RationalLine {
    type Item = Ratio<i64>;

    fn elements(&self) -> Box<dyn Iterator<Item = Ratio<i64>> + '_> {
        Box::new(RationalLine::iter())
    }
}

/// A finite order isomorphism between two enumerated dense orders, grown by
/// alternating forth and back steps. Committed pairs never change.
#[derive(Clone, Debug)]
pub struct PartialIso<A: DenseEnumeration, B: DenseEnumeration> {
    a: A,
    b: B,
    forth: BTreeMap<A::Item, B::Item>,
    back: BTreeMap<B::Item, A::Item>,
    pairs: Vec<(A::Item, B::Item)>,
    next_a: usize,
    next_b: usize,
    forth_turn: bool,
}

impl<A: DenseEnumeration, B: DenseEnumeration> PartialIso<A, B> {
    pub fn new(a: A, b: B) -> Self {
        PartialIso {
            a,
            b,
            forth: BTreeMap::new(),
            back: BTreeMap::new(),
            pairs: Vec::new(),
            next_a: 0,
            next_b: 0,
            forth_turn: true,
        }
    }

    /// Committed pairs in the order they were added.
    pub fn pairs(&self) -> &[(A::Item, B::Item)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, x: &A::Item) -> Option<&B::Item> {
        self.forth.get(x)
    }

    pub fn get_inverse(&self, y: &B::Item) -> Option<&A::Item> {
        self.back.get(y)
    }

    fn commit(&mut self, x: A::Item, y: B::Item) {
        self.forth.insert(x.clone(), y.clone());
        self.back.insert(y.clone(), x.clone());
        self.pairs.push((x, y));
    }

    /// One step: forth steps map the first uncovered element of `A`, back
    /// steps the first uncovered element of `B`.
    pub fn step(&mut self) {
        if self.forth_turn {
            let x = loop {
                let x = self.a.nth(self.next_a);
                self.next_a += 1;
                if !self.forth.contains_key(&x) {
                    break x;
                }
            };
            let lo = self.forth.range(..&x).next_back().map(|(_, y)| y);
            let hi = self.forth.range(&x..).next().map(|(_, y)| y);
            let y = self.b.first_between(lo, hi);
            self.commit(x, y);
        } else {
            let y = loop {
                let y = self.b.nth(self.next_b);
                self.next_b += 1;
                if !self.back.contains_key(&y) {
                    break y;
                }
            };
            let lo = self.back.range(..&y).next_back().map(|(_, x)| x);
            let hi = self.back.range(&y..).next().map(|(_, x)| x);
            let x = self.a.first_between(lo, hi);
            self.commit(x, y);
        }
        self.forth_turn = !self.forth_turn;
    }

    /// The image of `x`, extending the map until `x` is covered.
    ///
    /// `x` must occur in the enumeration of `A`, otherwise this does not
    /// return.
    pub fn image(&mut self, x: &A::Item) -> B::Item {
        while !self.forth.contains_key(x) {
            self.step();
        }
        self.forth[x].clone()
    }

    /// The preimage of `y`, extending the map until `y` is covered.
    pub fn preimage(&mut self, y: &B::Item) -> A::Item {
        while !self.back.contains_key(y) {
            self.step();
        }
        self.back[y].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{IntervalTree, TreePath};
    use std::collections::BTreeSet;

    #[test]
    fn rational_enumeration_prefix() {
        let first: Vec<String> = RationalLine::iter().take(9).map(|r| r.to_string()).collect();
        assert_eq!(first, ["0", "1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3"]);
        let distinct: BTreeSet<Ratio<i64>> = RationalLine::iter().take(2000).collect();
        assert_eq!(distinct.len(), 2000);
        assert!(RationalLine::iter().take(2000).all(|r| *r.denom() > 0 && r.numer().gcd(r.denom()) == 1));
    }

    #[test]
    fn first_step_maps_zero_to_root() {
        let mut iso = PartialIso::new(RationalLine, IntervalTree);
        assert_eq!(iso.image(&Ratio::from_integer(0)), TreePath::root());
        assert_eq!(iso.len(), 1);
    }

    #[test]
    fn prefixes_are_covered_and_order_preserved() {
        let mut iso = PartialIso::new(RationalLine, IntervalTree);
        for _ in 0..200 {
            iso.step();
        }
        let a: Vec<Ratio<i64>> = RationalLine::iter().take(100).collect();
        let b: Vec<TreePath> = (0..100).map(TreePath::breadth_first).collect();
        assert!(a.iter().all(|x| iso.get(x).is_some()));
        assert!(b.iter().all(|y| iso.get_inverse(y).is_some()));
        let pairs = iso.pairs().to_vec();
        for (x1, y1) in &pairs {
            for (x2, y2) in &pairs {
                assert_eq!(x1.cmp(x2), y1.cmp(y2));
            }
        }
    }

    #[test]
    fn repeated_queries_agree() {
        let mut iso = PartialIso::new(RationalLine, IntervalTree);
        let g = Ratio::new(-3, 4);
        let first = iso.image(&g);
        let committed = iso.len();
        assert_eq!(iso.image(&g), first);
        assert_eq!(iso.len(), committed);
        assert_eq!(iso.preimage(&first), g);
    }
}
