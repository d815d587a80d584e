use std::collections::BTreeSet;

use super::TruthSet;

/// A designated collection of subsets of a finite time flow.
///
/// `Powerset` stands for every subset without enumerating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropFamily {
    Powerset { points: usize },
    Sets { points: usize, members: BTreeSet<TruthSet> },
}

impl PropFamily {
    pub fn powerset(points: usize) -> Self {
        PropFamily::Powerset { points }
    }

    /// An arbitrary family; no closure conditions are imposed.
    pub fn from_sets(points: usize, members: impl IntoIterator<Item = TruthSet>) -> Self {
        let full = TruthSet::full(points);
        PropFamily::Sets {
            points,
            members: members.into_iter().map(|s| s.intersection(full)).collect(),
        }
    }

    pub fn points(&self) -> usize {
        match self {
            PropFamily::Powerset { points } | PropFamily::Sets { points, .. } => *points,
        }
    }

    pub fn contains(&self, set: TruthSet) -> bool {
        match self {
            PropFamily::Powerset { points } => set.is_subset(TruthSet::full(*points)),
            PropFamily::Sets { members, .. } => members.contains(&set),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PropFamily::Powerset { points } => 1 << points,
            PropFamily::Sets { members, .. } => members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every subset is a member, whether or not it is stored that way.
    pub fn is_powerset(&self) -> bool {
        match self {
            PropFamily::Powerset { .. } => true,
            PropFamily::Sets { points, members } => {
                *points < 64 && members.len() == 1usize << points
            }
        }
    }

    pub fn members(&self) -> Box<dyn Iterator<Item = TruthSet> + '_> {
        match self {
            PropFamily::Powerset { points } => Box::new(TruthSet::all_subsets(*points)),
            PropFamily::Sets { members, .. } => Box::new(members.iter().copied()),
        }
    }

    /// `⊓Z`: the union of all members included in `⋂Z`, i.e. the interior of
    /// `⋂Z` in the topology with this family as base. `⋂∅` is the whole flow.
    pub fn glb(&self, z: impl IntoIterator<Item = TruthSet>) -> TruthSet {
        let n = self.points();
        let meet = z
            .into_iter()
            .fold(TruthSet::full(n), TruthSet::intersection);
        match self {
            PropFamily::Powerset { .. } => meet,
            PropFamily::Sets { members, .. } => members
                .iter()
                .filter(|y| y.is_subset(meet))
                .fold(TruthSet::EMPTY, |acc, &y| acc.union(y)),
        }
    }

    /// `⊔Z`: the intersection of all members including `⋃Z`, i.e. the closure
    /// of `⋃Z`. `⋃∅` is empty.
    pub fn lub(&self, z: impl IntoIterator<Item = TruthSet>) -> TruthSet {
        let n = self.points();
        let join = z.into_iter().fold(TruthSet::EMPTY, TruthSet::union);
        match self {
            PropFamily::Powerset { .. } => join,
            PropFamily::Sets { members, .. } => members
                .iter()
                .filter(|y| join.is_subset(**y))
                .fold(TruthSet::full(n), |acc, &y| acc.intersection(y)),
        }
    }

    /// Closed under complement and binary intersection.
    pub fn is_boolean(&self) -> bool {
        match self {
            PropFamily::Powerset { .. } => true,
            PropFamily::Sets { points, members } => {
                !members.is_empty()
                    && members.iter().all(|a| {
                        members.contains(&a.complement(*points))
                            && members.iter().all(|b| members.contains(&a.intersection(*b)))
                    })
            }
        }
    }

    /// Closed under the Boolean operations and under `[<]` and `[>]`.
    pub fn is_closed(&self) -> bool {
        let n = self.points();
        self.is_boolean()
            && self
                .members()
                .all(|a| self.contains(a.box_future(n)) && self.contains(a.box_past(n)))
    }
}

/// Least family containing `seed` and `∅` that is closed under complement,
/// intersection, `[<]` and `[>]`.
pub fn close_family(seed: impl IntoIterator<Item = TruthSet>, points: usize) -> PropFamily {
    saturate(seed, points, true)
}

/// Least Boolean set algebra containing `seed` (no temporal closure).
pub fn boolean_closure(seed: impl IntoIterator<Item = TruthSet>, points: usize) -> PropFamily {
    saturate(seed, points, false)
}

fn saturate(seed: impl IntoIterator<Item = TruthSet>, points: usize, temporal: bool) -> PropFamily {
    let full = TruthSet::full(points);
    let mut members: BTreeSet<TruthSet> = BTreeSet::new();
    let mut queue: Vec<TruthSet> = vec![TruthSet::EMPTY];
    queue.extend(seed.into_iter().map(|s| s.intersection(full)));
    while let Some(x) = queue.pop() {
        if !members.insert(x) {
            continue;
        }
        let mut derived = vec![x.complement(points)];
        if temporal {
            derived.push(x.box_future(points));
            derived.push(x.box_past(points));
        }
        derived.extend(members.iter().map(|y| x.intersection(*y)));
        queue.extend(derived.into_iter().filter(|d| !members.contains(d)));
    }
    PropFamily::Sets { points, members }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[usize]) -> TruthSet {
        TruthSet::from_points(points.iter().copied())
    }

    #[test]
    fn glb_is_interior_of_meet() {
        // T = {1,2,3,4} stored at positions 0..4
        let prop = PropFamily::from_sets(4, [set(&[]), set(&[0, 1]), set(&[2, 3]), set(&[0, 1, 2, 3])]);
        assert_eq!(prop.glb([set(&[0, 1, 2])]), set(&[0, 1]));
        assert_eq!(prop.glb([]), TruthSet::full(4));
        assert_eq!(prop.lub([set(&[0])]), set(&[0, 1]));
        assert_eq!(prop.lub([]), TruthSet::EMPTY);
    }

    #[test]
    fn powerset_glb_is_intersection() {
        let prop = PropFamily::powerset(3);
        assert_eq!(prop.glb([set(&[0, 1]), set(&[1, 2])]), set(&[1]));
        assert_eq!(prop.lub([set(&[0]), set(&[2])]), set(&[0, 2]));
    }

    #[test]
    fn closure_of_empty_seed_is_powerset() {
        for n in 1..=5 {
            let fam = close_family([], n);
            assert!(fam.is_powerset(), "n = {n}");
            assert!(fam.is_closed());
        }
        let single = close_family([TruthSet::full(1)], 1);
        assert_eq!(single.len(), 2);
    }

    #[test]
    fn boolean_closure_need_not_be_temporally_closed() {
        let fam = boolean_closure([set(&[0, 1])], 4);
        assert_eq!(fam.len(), 4);
        assert!(fam.is_boolean());
        assert!(!fam.is_closed());
    }
}
