use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DenseEnumeration, Scalar};

/// Address of a node in the interval tree: `L`/`R` steps from the root.
///
/// Each node owns the middle third of its gap; its left child subdivides
/// the part of the gap to the left of that interval, its right child the
/// part to the right. Ordering is left-to-right position of the intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreePath(Vec<Step>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    L,
    R,
}

impl TreePath {
    pub fn root() -> Self {
        TreePath(Vec::new())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, step: Step) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        TreePath(steps)
    }

    /// The node at position `i` in breadth-first order (root is 0).
    pub fn breadth_first(i: usize) -> Self {
        let code = i as u128 + 1;
        let depth = 127 - code.leading_zeros() as usize;
        TreePath(
            (0..depth)
                .rev()
                .map(|b| if code >> b & 1 == 1 { Step::R } else { Step::L })
                .collect(),
        )
    }

    /// Every path of depth at most `depth`, in breadth-first order.
    pub fn up_to_depth(depth: usize) -> impl Iterator<Item = TreePath> {
        (0..(1usize << (depth + 1)) - 1).map(TreePath::breadth_first)
    }

    /// The open interval at this address, with the root gap `(2, 3)`.
    pub fn interval<S: Scalar>(&self) -> (S, S) {
        let (mut lo, mut hi) = (S::from_i64(2).unwrap(), S::from_i64(3).unwrap());
        for step in &self.0 {
            let (a, b) = middle_third(&lo, &hi);
            match step {
                Step::L => hi = a,
                Step::R => lo = b,
            }
        }
        middle_third(&lo, &hi)
    }
}

fn middle_third<S: Scalar>(lo: &S, hi: &S) -> (S, S) {
    let third = (hi.clone() - lo.clone()) / S::from_i64(3).unwrap();
    let a = lo.clone() + third.clone();
    let b = a.clone() + third;
    (a, b)
}

impl Ord for TreePath {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return a.cmp(b);
            }
        }
        // one path extends the other; the extension lies on the side of its next step
        match self.0.len().cmp(&other.0.len()) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Less => match other.0[self.0.len()] {
                Step::L => Ordering::Greater,
                Step::R => Ordering::Less,
            },
            Ordering::Greater => match self.0[other.0.len()] {
                Step::L => Ordering::Less,
                Step::R => Ordering::Greater,
            },
        }
    }
}

impl PartialOrd for TreePath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for s in &self.0 {
            f.write_str(match s {
                Step::L => "L",
                Step::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for TreePath {
    type Err = String;

    /// Accepts `root`, the empty string, or a word over `L` and `R`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "root" {
            return Ok(TreePath::root());
        }
        s.chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Step::L),
                'R' | 'r' => Ok(Step::R),
                other => Err(format!("unexpected `{other}` in path; use L and R")),
            })
            .collect::<Result<_, _>>()
            .map(TreePath)
    }
}

impl Serialize for TreePath {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TreePath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The interval tree, enumerated breadth first.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntervalTree;

impl DenseEnumeration for IntervalTree {
    type Item = TreePath;

    fn elements(&self) -> Box<dyn Iterator<Item = TreePath> + '_> {
        Box::new((0..).map(TreePath::breadth_first))
    }

    fn nth(&self, i: usize) -> TreePath {
        TreePath::breadth_first(i)
    }

    /// The shallowest node strictly between the bounds, which is also the
    /// first such node in breadth-first order.
    fn first_between(&self, lo: Option<&TreePath>, hi: Option<&TreePath>) -> TreePath {
        let mut node = TreePath::root();
        loop {
            if lo.is_some_and(|l| node <= *l) {
                node = node.child(Step::R);
            } else if hi.is_some_and(|h| node >= *h) {
                node = node.child(Step::L);
            } else {
                return node;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn root_and_left_child() {
        assert_eq!(TreePath::root().interval::<BigRational>(), (q(7, 3), q(8, 3)));
        let left: TreePath = "L".parse().unwrap();
        assert_eq!(left.interval::<BigRational>(), (q(19, 9), q(20, 9)));
        let right: TreePath = "R".parse().unwrap();
        assert_eq!(right.interval::<BigRational>(), (q(25, 9), q(26, 9)));
    }

    #[test]
    fn breadth_first_order() {
        let names: Vec<String> = (0..7).map(|i| TreePath::breadth_first(i).to_string()).collect();
        assert_eq!(names, ["root", "L", "R", "LL", "LR", "RL", "RR"]);
        assert_eq!(TreePath::up_to_depth(2).count(), 7);
    }

    #[test]
    fn order_matches_interval_position() {
        let paths: Vec<TreePath> = TreePath::up_to_depth(5).collect();
        for a in &paths {
            for b in &paths {
                let (alo, _) = a.interval::<BigRational>();
                let (blo, _) = b.interval::<BigRational>();
                assert_eq!(a.cmp(b), alo.cmp(&blo), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn first_between_is_breadth_first_least() {
        let paths: Vec<TreePath> = TreePath::up_to_depth(4).collect();
        for lo in &paths {
            for hi in &paths {
                if lo >= hi {
                    continue;
                }
                let fast = IntervalTree.first_between(Some(lo), Some(hi));
                let slow = (0..).map(TreePath::breadth_first).find(|p| p > lo && p < hi).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn path_text_round_trip() {
        for p in TreePath::up_to_depth(3) {
            assert_eq!(p.to_string().parse::<TreePath>().unwrap(), p);
        }
        assert!("LX".parse::<TreePath>().is_err());
    }
}
