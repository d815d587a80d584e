use std::fmt;

/// Largest supported time flow.
pub const MAX_POINTS: usize = 64;

/// A subset of a finite time flow, stored as a bitset over point positions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthSet(u64);

impl TruthSet {
    pub const EMPTY: TruthSet = TruthSet(0);

    pub fn from_bits(bits: u64) -> Self {
        TruthSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All points of a flow with `n` points.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            TruthSet(u64::MAX)
        } else {
            TruthSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(t: usize) -> Self {
        TruthSet(1 << t)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        points.into_iter().fold(TruthSet::EMPTY, |s, t| s.with(t))
    }

    pub fn contains(self, t: usize) -> bool {
        self.0 >> t & 1 == 1
    }

    pub fn with(self, t: usize) -> Self {
        TruthSet(self.0 | 1 << t)
    }

    pub fn without(self, t: usize) -> Self {
        TruthSet(self.0 & !(1 << t))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        TruthSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        TruthSet(self.0 & other.0)
    }

    /// Complement relative to a flow with `n` points.
    pub fn complement(self, n: usize) -> Self {
        TruthSet(!self.0 & TruthSet::full(n).0)
    }

    pub fn difference(self, other: Self) -> Self {
        TruthSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_POINTS).filter(move |&t| bits >> t & 1 == 1)
    }

    /// Every subset of a flow with `n` points, in increasing bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = TruthSet> {
        assert!(n < MAX_POINTS, "powerset enumeration limited to {} points", MAX_POINTS - 1);
        (0..1u64 << n).map(TruthSet)
    }

    /// `[<]X`: points all of whose successors lie in `X`.
    ///
    /// Point positions are the temporal order, so position `t` precedes `t + 1`.
    pub fn box_future(self, n: usize) -> Self {
        // t ∈ [<]X iff every s > t lies in X; sweep from the top
        let mut out = 0u64;
        let mut all_after = true;
        for t in (0..n).rev() {
            if all_after {
                out |= 1 << t;
            }
            all_after &= self.contains(t);
        }
        TruthSet(out)
    }

    /// `[>]X`: points all of whose predecessors lie in `X`.
    pub fn box_past(self, n: usize) -> Self {
        let mut out = 0u64;
        let mut all_before = true;
        for t in 0..n {
            if all_before {
                out |= 1 << t;
            }
            all_before &= self.contains(t);
        }
        TruthSet(out)
    }

    /// `<<>X`: points with some successor in `X`.
    pub fn diamond_future(self, n: usize) -> Self {
        self.complement(n).box_future(n).complement(n)
    }

    /// `<>>X`: points with some predecessor in `X`.
    pub fn diamond_past(self, n: usize) -> Self {
        self.complement(n).box_past(n).complement(n)
    }
}

impl fmt::Debug for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points()).finish()
    }
}
