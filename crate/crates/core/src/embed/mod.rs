//! The order `ω ⊕ (ℚ × ℤ)` of a countable nonstandard model of arithmetic
//! (a standard part followed by ℚ-indexed galaxies, each a copy of ℤ) and
//! its order embedding `θ` into the rationals.
//!
//! Standard elements go to `n/(n+1)` in `[0, 1)`. Galaxies are matched with
//! nodes of a tree of pairwise disjoint subintervals of `(2, 3)` by a lazy
//! back-and-forth, and each galaxy is squeezed into its node's interval.

mod interval;
mod iso;

pub use interval::{IntervalTree, Step, TreePath};
pub use iso::{DenseEnumeration, PartialIso, RationalLine};

use std::fmt::{self, Debug};
use std::marker::PhantomData;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

/// Numbers `θ` can take values in.
pub trait Scalar: Clone + PartialOrd + Debug + Num + FromPrimitive {}

impl<T: Clone + PartialOrd + Debug + Num + FromPrimitive> Scalar for T {}

/// Galaxies are indexed by rationals.
pub type GalaxyIndex = Ratio<i64>;

/// An element of `ω ⊕ (ℚ × ℤ)`. The derived order is the intended one:
/// standard elements by value, all below the galaxies, which are ordered by
/// index and then offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NsElement {
    Std(u64),
    Gal(GalaxyIndex, i64),
}

pub fn ns_cmp(a: &NsElement, b: &NsElement) -> std::cmp::Ordering {
    a.cmp(b)
}

impl fmt::Display for NsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsElement::Std(n) => write!(f, "{n}"),
            NsElement::Gal(g, j) => write!(f, "{g}:{j}"),
        }
    }
}

impl FromStr for NsElement {
    type Err = String;

    /// `n` for a standard element, `g:j` (e.g. `-1/2:3`) for offset `j` in
    /// galaxy `g`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once(':') {
            None => s
                .parse()
                .map(NsElement::Std)
                .map_err(|e| format!("bad standard element `{s}`: {e}")),
            Some((g, j)) => {
                let g: GalaxyIndex = g.trim().parse().map_err(|e| format!("bad galaxy index `{g}`: {e}"))?;
                let j: i64 = j.trim().parse().map_err(|e| format!("bad offset `{j}`: {e}"))?;
                Ok(NsElement::Gal(g, j))
            }
        }
    }
}

impl Serialize for NsElement {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NsElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `θ`, with the galaxy-to-interval matching built on demand.
#[derive(Clone, Debug)]
pub struct ThetaEmbedding<S> {
    iso: PartialIso<RationalLine, IntervalTree>,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> Default for ThetaEmbedding<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> ThetaEmbedding<S> {
    pub fn new() -> Self {
        ThetaEmbedding {
            iso: PartialIso::new(RationalLine, IntervalTree),
            _scalar: PhantomData,
        }
    }

    pub fn iso(&self) -> &PartialIso<RationalLine, IntervalTree> {
        &self.iso
    }

    /// The tree node assigned to galaxy `g`.
    pub fn galaxy_node(&mut self, g: &GalaxyIndex) -> TreePath {
        self.iso.image(g)
    }

    pub fn galaxy_interval(&mut self, g: &GalaxyIndex) -> (S, S) {
        self.galaxy_node(g).interval()
    }

    pub fn theta(&mut self, a: &NsElement) -> S {
        match a {
            NsElement::Std(n) => standard_theta(*n),
            NsElement::Gal(g, j) => {
                let (u, v) = self.galaxy_interval(g);
                let two = S::from_u8(2).unwrap();
                let mid = (u.clone() + v.clone()) / two.clone();
                let half_width = (v - u) / two.clone();
                mid + half_width * squeeze::<S>(*j) / two
            }
        }
    }
}

/// `n/(n+1)`.
pub fn standard_theta<S: Scalar>(n: u64) -> S {
    let n = S::from_u64(n).unwrap();
    n.clone() / (n + S::one())
}

/// `j/(|j|+1)`, an increasing map of ℤ into `(-1, 1)`.
pub fn squeeze<S: Scalar>(j: i64) -> S {
    S::from_i64(j).unwrap() / (S::from_u64(j.unsigned_abs()).unwrap() + S::one())
}
