//! Formal products and quotients of factors `1 - q^a t^b`.
//!
//! Identities whose two sides are products of such factors can often be
//! checked by comparing the factor multisets alone, without expanding
//! anything. A [`FactorBag`] keeps numerator and denominator as multisets of
//! exponent pairs, and [`FactorBag::cancel`] removes common factors pairwise.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::frac::QTFraction;
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// The factor `1 - q^a t^b` with `(a, b) ≠ (0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QTFactor {
    a: u32,
    b: u32,
}

impl QTFactor {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::domain("the factor 1 - q^0 t^0 is identically zero"));
        }
        Ok(QTFactor { a, b })
    }

    /// Exponent of `q`.
    pub fn a(self) -> u32 {
        self.a
    }

    /// Exponent of `t`.
    pub fn b(self) -> u32 {
        self.b
    }

    pub fn to_poly(self) -> IntPoly {
        IntPoly::one_minus(self.a, self.b)
    }

    /// Image under `q ↦ t`: `1 - t^(a+b)`.
    pub fn q_to_t(self) -> QTFactor {
        QTFactor {
            a: 0,
            b: self.a + self.b,
        }
    }
}

/// Written compactly: `1-q^2t^5`, `1-qt^3`, `1-t`.
impl fmt::Display for QTFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |name: &str, e: u32| match e {
            0 => String::new(),
            1 => name.to_string(),
            e => format!("{name}^{e}"),
        };
        write!(f, "1-{}{}", var("q", self.a), var("t", self.b))
    }
}

impl Serialize for QTFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QTFactor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[u32; 2]>::deserialize(d)?;
        QTFactor::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// A finite multiset of factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactorSet {
    counts: BTreeMap<QTFactor, usize>,
}

impl FactorSet {
    pub fn new() -> Self {
        FactorSet::default()
    }

    pub fn insert(&mut self, f: QTFactor) {
        self.insert_n(f, 1);
    }

    pub fn insert_n(&mut self, f: QTFactor, n: usize) {
        if n > 0 {
            *self.counts.entry(f).or_default() += n;
        }
    }

    /// Removes up to `n` copies, returning how many were removed.
    pub fn remove_n(&mut self, f: QTFactor, n: usize) -> usize {
        let Some(c) = self.counts.get_mut(&f) else {
            return 0;
        };
        let k = n.min(*c);
        *c -= k;
        if *c == 0 {
            self.counts.remove(&f);
        }
        k
    }

    pub fn count(&self, f: QTFactor) -> usize {
        self.counts.get(&f).copied().unwrap_or(0)
    }

    /// Total number of factors, with multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct factors with their multiplicities.
    pub fn counts(&self) -> impl Iterator<Item = (QTFactor, usize)> + '_ {
        self.counts.iter().map(|(f, c)| (*f, *c))
    }

    /// Every factor, repeated by multiplicity, in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = QTFactor> + '_ {
        self.counts
            .iter()
            .flat_map(|(f, c)| std::iter::repeat(*f).take(*c))
    }

    pub fn union(&self, other: &FactorSet) -> FactorSet {
        let mut out = self.clone();
        for (f, c) in other.counts() {
            out.insert_n(f, c);
        }
        out
    }

    pub fn map(&self, f: impl Fn(QTFactor) -> QTFactor) -> FactorSet {
        let mut out = FactorSet::new();
        for (x, c) in self.counts() {
            out.insert_n(f(x), c);
        }
        out
    }

    pub fn product(&self) -> IntPoly {
        self.counts()
            .map(|(f, c)| f.to_poly().pow(c as u32))
            .product()
    }
}

impl FromIterator<QTFactor> for FactorSet {
    fn from_iter<I: IntoIterator<Item = QTFactor>>(iter: I) -> Self {
        let mut s = FactorSet::new();
        for f in iter {
            s.insert(f);
        }
        s
    }
}

impl Extend<QTFactor> for FactorSet {
    fn extend<I: IntoIterator<Item = QTFactor>>(&mut self, iter: I) {
        for f in iter {
            self.insert(f);
        }
    }
}

impl Serialize for FactorSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[u32; 2]> = self.iter().map(|f| [f.a, f.b]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactorSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[u32; 2]>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|[a, b]| QTFactor::new(a, b).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A formal quotient `Π num / Π den` of `1 - q^a t^b` factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorBag {
    pub num: FactorSet,
    pub den: FactorSet,
}

impl FactorBag {
    pub fn new(num: FactorSet, den: FactorSet) -> Self {
        FactorBag { num, den }
    }

    /// Convenience constructor from exponent pairs.
    pub fn from_pairs(num: &[(u32, u32)], den: &[(u32, u32)]) -> Result<Self> {
        let build = |v: &[(u32, u32)]| {
            v.iter()
                .map(|&(a, b)| QTFactor::new(a, b))
                .collect::<Result<FactorSet>>()
        };
        Ok(FactorBag {
            num: build(num)?,
            den: build(den)?,
        })
    }

    pub fn one() -> Self {
        FactorBag::default()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_empty() && self.den.is_empty()
    }

    pub fn mul(&self, other: &FactorBag) -> FactorBag {
        FactorBag {
            num: self.num.union(&other.num),
            den: self.den.union(&other.den),
        }
    }

    pub fn div(&self, other: &FactorBag) -> FactorBag {
        FactorBag {
            num: self.num.union(&other.den),
            den: self.den.union(&other.num),
        }
    }

    /// Removes factors common to numerator and denominator, pairwise.
    pub fn cancel(&self) -> FactorBag {
        let mut out = self.clone();
        for (f, c) in self.num.counts() {
            let k = out.den.remove_n(f, c);
            out.num.remove_n(f, k);
        }
        out
    }

    pub fn is_cancelled(&self) -> bool {
        self.num.counts().all(|(f, _)| self.den.count(f) == 0)
    }

    /// Expands both products into polynomials.
    pub fn expand(&self) -> QTFraction {
        QTFraction::new(self.num.product(), self.den.product())
            .expect("products of nonzero factors are nonzero")
    }

    /// Applies `q ↦ t` to every factor.
    pub fn q_to_t(&self) -> FactorBag {
        FactorBag {
            num: self.num.map(QTFactor::q_to_t),
            den: self.den.map(QTFactor::q_to_t),
        }
    }

    /// Same rational function after cancellation, judged on the multisets.
    pub fn multiset_eq(&self, other: &FactorBag) -> bool {
        self.div(other).cancel().is_one()
    }
}

impl fmt::Display for FactorBag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &FactorSet| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join("")
            }
        };
        write!(f, "{} / {}", side(&self.num), side(&self.den))
    }
}
