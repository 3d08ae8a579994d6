use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent pair `(a, b)` of the monomial `q^a t^b`.
pub type Exponent = (u32, u32);

/// A polynomial in `ℤ[q, t]`, stored sparsely.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality. Terms iterate in lexicographic order of `(a, b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

/// Image of a variable under [`IntPoly::subst`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subst {
    /// The monomial `q^a t^b`. `Monomial(1, 0)` keeps `q`, `Monomial(0, 1)`
    /// sends a variable to `t`.
    Monomial(u32, u32),
    Constant(BigInt),
}

impl Subst {
    pub fn q() -> Self {
        Subst::Monomial(1, 0)
    }

    pub fn t() -> Self {
        Subst::Monomial(0, 1)
    }

    pub fn constant(c: i64) -> Self {
        Subst::Constant(BigInt::from(c))
    }

    /// `(coefficient, exponent)` of `image^k`.
    fn power(&self, k: u32) -> (BigInt, Exponent) {
        match self {
            Subst::Monomial(a, b) => (BigInt::one(), (a * k, b * k)),
            Subst::Constant(c) => (Pow::pow(c, k), (0, 0)),
        }
    }
}

/// The specialization loci used by the Macdonald degenerations. Each is the
/// zero set of an irreducible linear polynomial, which lets a removable
/// singularity be cancelled by exact division before substituting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Locus {
    QEqualsT,
    TEqualsOne,
    QEqualsOne,
    QEqualsZero,
    TEqualsZero,
}

impl Locus {
    pub const ALL: [Locus; 5] = [
        Locus::QEqualsT,
        Locus::TEqualsOne,
        Locus::QEqualsOne,
        Locus::QEqualsZero,
        Locus::TEqualsZero,
    ];

    /// The polynomial cutting out the locus.
    pub fn vanishing_poly(self) -> IntPoly {
        match self {
            Locus::QEqualsT => IntPoly::q() - IntPoly::t(),
            Locus::TEqualsOne => IntPoly::one_minus(0, 1),
            Locus::QEqualsOne => IntPoly::one_minus(1, 0),
            Locus::QEqualsZero => IntPoly::q(),
            Locus::TEqualsZero => IntPoly::t(),
        }
    }

    /// Substitutions `(q ↦ ·, t ↦ ·)` that restrict to the locus.
    pub fn substitution(self) -> (Subst, Subst) {
        match self {
            Locus::QEqualsT => (Subst::t(), Subst::t()),
            Locus::TEqualsOne => (Subst::q(), Subst::constant(1)),
            Locus::QEqualsOne => (Subst::constant(1), Subst::t()),
            Locus::QEqualsZero => (Subst::constant(0), Subst::t()),
            Locus::TEqualsZero => (Subst::q(), Subst::constant(0)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Locus::QEqualsT => "q=t",
            Locus::TEqualsOne => "t=1",
            Locus::QEqualsOne => "q=1",
            Locus::QEqualsZero => "q=0",
            Locus::TEqualsZero => "t=0",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Locus::ALL
            .into_iter()
            .find(|l| l.label() == compact)
            .ok_or_else(|| Error::Parse(format!("unknown specialization {s:?}")))
    }
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::monomial(c, 0, 0)
    }

    /// `c q^a t^b`.
    pub fn monomial(c: impl Into<BigInt>, a: u32, b: u32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        IntPoly { terms }
    }

    pub fn q() -> Self {
        IntPoly::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        IntPoly::monomial(1, 0, 1)
    }

    /// `1 - q^a t^b`.
    pub fn one_minus(a: u32, b: u32) -> Self {
        IntPoly::one() - IntPoly::monomial(1, a, b)
    }

    /// Builds a polynomial from `(a, b, c)` triples, summing repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = IntPoly::zero();
        for (a, b, c) in terms {
            p.add_term((a, b), c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree_q(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn degree_t(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(Exponent, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Gcd of the coefficients, zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Divides every coefficient by `k`, which must divide them all.
    pub fn div_scalar_exact(&self, k: &BigInt) -> IntPoly {
        IntPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert!((c % k).is_zero());
                    (*e, c / k)
                })
                .collect(),
        }
    }

    /// Multiplies by the monomial `q^a t^b`.
    pub fn shift(&self, a: u32, b: u32) -> IntPoly {
        IntPoly {
            terms: self
                .terms
                .iter()
                .map(|((x, y), c)| ((x + a, y + b), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut out = IntPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `q ↦ q_to`, `t ↦ t_to` and re-canonicalizes.
    pub fn subst(&self, q_to: &Subst, t_to: &Subst) -> IntPoly {
        let mut out = IntPoly::zero();
        for (&(a, b), c) in &self.terms {
            let (cq, (qa, qb)) = q_to.power(a);
            let (ct, (ta, tb)) = t_to.power(b);
            out.add_term((qa + ta, qb + tb), c * cq * ct);
        }
        out
    }

    pub fn eval_rational(&self, q: &BigRational, t: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                BigRational::from_integer(c.clone()) * Pow::pow(q, a) * Pow::pow(t, b)
            })
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn eval_f64(&self, q: f64, t: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                c.to_f64().unwrap_or(f64::NAN) * q.powi(a as i32) * t.powi(b as i32)
            })
            .sum()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Runs the division algorithm with respect to the lexicographic order on
    /// `(a, b)`; for a single divisor the remainder is zero exactly when the
    /// division is exact.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let ((da, db), dc) = d.leading_term()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = IntPoly::zero();
        while let Some(((ra, rb), rc)) = rem.leading_term() {
            if ra < da || rb < db {
                return None;
            }
            let (k, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let (sa, sb) = (ra - da, rb - db);
            for (&(xa, xb), xc) in &d.terms {
                rem.add_term((xa + sa, xb + sb), -(xc * &k));
            }
            quot.add_term((sa, sb), k);
        }
        Some(quot)
    }

    /// Largest `k` with `ℓ^k | self` for the locus polynomial `ℓ`, together
    /// with `self / ℓ^k`. The zero polynomial has no finite order.
    pub fn order_along(&self, locus: Locus) -> Result<(usize, IntPoly)> {
        if self.is_zero() {
            return Err(Error::domain("the zero polynomial vanishes to infinite order"));
        }
        let ell = locus.vanishing_poly();
        let (qs, ts) = locus.substitution();
        let mut p = self.clone();
        let mut order = 0;
        while p.subst(&qs, &ts).is_zero() {
            p = p.div_exact(&ell).ok_or_else(|| {
                Error::Internal(format!(
                    "{p} vanishes on {} but is not divisible by {ell}",
                    locus.label()
                ))
            })?;
            order += 1;
        }
        Ok((order, p))
    }

    /// `self = (1 - t)^order · reduced` with `reduced(q, 1) ≠ 0`.
    pub fn vanish_order_t1(&self) -> Result<(usize, IntPoly)> {
        self.order_along(Locus::TEqualsOne)
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

// Dense accumulation is used when the product's exponent box is small
// enough; the inputs here rarely exceed a few hundred in either degree.
const DENSE_LIMIT: usize = 1 << 22;

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let width = (self.degree_t() + rhs.degree_t() + 1) as usize;
        let height = (self.degree_q() + rhs.degree_q() + 1) as usize;
        if width.saturating_mul(height) <= DENSE_LIMIT {
            let mut acc = vec![BigInt::zero(); width * height];
            for (&(a1, b1), c1) in &self.terms {
                for (&(a2, b2), c2) in &rhs.terms {
                    acc[(a1 + a2) as usize * width + (b1 + b2) as usize] += c1 * c2;
                }
            }
            let terms = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (((k / width) as u32, (k % width) as u32), c))
                .collect();
            IntPoly { terms }
        } else {
            let mut out = IntPoly::zero();
            for (&(a1, b1), c1) in &self.terms {
                for (&(a2, b2), c2) in &rhs.terms {
                    out.add_term((a1 + a2, b1 + b2), c1 * c2);
                }
            }
            out
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

impl std::iter::Sum for IntPoly {
    fn sum<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, a: u32, b: u32) -> fmt::Result {
    for (var, e) in [("q", a), ("t", b)] {
        match e {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{e}")?,
        }
    }
    Ok(())
}

/// Renders as e.g. `1 + q - t - qt^2`, constant term first.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&(a, b), c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if (a, b) == (0, 0) {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write_monomial(f, a, b)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    q: u32,
    t: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(&(q, t), c)| TermJson {
                    q,
                    t,
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut p = IntPoly::zero();
        for term in raw.terms {
            let c: BigInt = term.c.parse().map_err(serde::de::Error::custom)?;
            p.add_term((term.q, term.t), c);
        }
        Ok(p)
    }
}
