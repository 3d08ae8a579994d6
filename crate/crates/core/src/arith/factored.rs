//! Rational functions with a formally factored denominator.
//!
//! Long sums of fractions (as in Gram–Schmidt) blow up quickly when
//! denominators are multiplied out. Here the denominator is a positive
//! integer times a multiset of polynomial factors; sums use the formal
//! least common multiple of the two multisets, and after every operation the
//! numerator is trial-divided by each denominator factor. No polynomial gcd
//! is ever computed, so the representation is not always fully reduced, but
//! in the Macdonald setting denominators are products of `1 - q^a t^b` and
//! the trial division catches them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::frac::QTFraction;
use super::poly::IntPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredFraction {
    num: IntPoly,
    /// Positive.
    scale: BigInt,
    den: BTreeMap<IntPoly, u32>,
}

/// Splits `p` into a signed integer unit and a list of non-constant factors:
/// powers of `q` and `t`, binomials `1 - q^a t^b`, and whatever remains.
pub fn factorize(p: &IntPoly) -> Result<(BigInt, Vec<IntPoly>)> {
    if p.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    let mut unit = p.content();
    if p.leading_term().is_some_and(|(_, c)| c.is_negative()) {
        unit = -unit;
    }
    let mut rest = p.div_scalar_exact(&unit);
    let mut factors = Vec::new();

    let min_q = rest.terms().map(|((a, _), _)| a).min().unwrap_or(0);
    let min_t = rest.terms().map(|((_, b), _)| b).min().unwrap_or(0);
    factors.extend(std::iter::repeat(IntPoly::q()).take(min_q as usize));
    factors.extend(std::iter::repeat(IntPoly::t()).take(min_t as usize));
    rest = IntPoly::from_terms(rest.terms().map(|((a, b), c)| (a - min_q, b - min_t, c.clone())));

    // Every binomial vanishes at q = t = 1, so nothing to try otherwise.
    let mut candidates: Vec<(u32, u32)> = Vec::new();
    for a in 0..=rest.degree_q() {
        for b in 0..=rest.degree_t() {
            if (a, b) != (0, 0) {
                candidates.push((a, b));
            }
        }
    }
    candidates.sort_by_key(|&(a, b)| std::cmp::Reverse((a + b, a)));
    let value_at_one = |p: &IntPoly| -> BigInt { p.terms().map(|(_, c)| c.clone()).sum() };
    let mut vanishes = value_at_one(&rest).is_zero();
    for (a, b) in candidates {
        if !vanishes {
            break;
        }
        if rest.degree_q() < a || rest.degree_t() < b {
            continue;
        }
        let binom = IntPoly::one_minus(a, b);
        while vanishes {
            match rest.div_exact(&binom) {
                Some(quot) => {
                    rest = quot;
                    factors.push(binom.clone());
                    vanishes = value_at_one(&rest).is_zero();
                }
                None => break,
            }
        }
    }
    match rest.constant_value() {
        Some(c) => unit *= c,
        None => {
            if rest.leading_term().is_some_and(|(_, c)| c.is_negative()) {
                rest = -rest;
                unit = -unit;
            }
            factors.push(rest);
        }
    }
    Ok((unit, factors))
}

impl FactoredFraction {
    pub fn from_poly(p: IntPoly) -> Self {
        FactoredFraction {
            num: p,
            scale: BigInt::one(),
            den: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        FactoredFraction::from_poly(IntPoly::zero())
    }

    pub fn one() -> Self {
        FactoredFraction::from_poly(IntPoly::one())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let mut num = IntPoly::constant(r.numer().clone());
        let mut scale = r.denom().clone();
        if scale.is_negative() {
            scale = -scale;
            num = -num;
        }
        FactoredFraction {
            num,
            scale,
            den: BTreeMap::new(),
        }
    }

    /// Builds `num / Π den_factors`; the factors must be nonzero.
    pub fn with_factors(num: IntPoly, den_factors: impl IntoIterator<Item = IntPoly>) -> Result<Self> {
        let mut out = FactoredFraction::from_poly(num);
        for f in den_factors {
            let (unit, parts) = factorize(&f)?;
            out.absorb_unit(&unit);
            for p in parts {
                *out.den.entry(p).or_default() += 1;
            }
        }
        out.reduce();
        Ok(out)
    }

    pub fn from_qt(f: &QTFraction) -> Result<Self> {
        FactoredFraction::with_factors(f.num().clone(), [f.den().clone()])
    }

    fn absorb_unit(&mut self, unit: &BigInt) {
        if unit.is_negative() {
            self.num = -&self.num;
        }
        self.scale *= unit.abs();
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    /// Denominator factors with multiplicities, excluding the integer scale.
    pub fn den_factors(&self) -> impl Iterator<Item = (&IntPoly, u32)> + '_ {
        self.den.iter().map(|(p, k)| (p, *k))
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_product(&self) -> IntPoly {
        let mut d = IntPoly::constant(self.scale.clone());
        for (p, k) in &self.den {
            d = d * p.pow(*k);
        }
        d
    }

    pub fn to_qt(&self) -> QTFraction {
        QTFraction::new(self.num.clone(), self.den_product()).expect("nonzero denominator")
    }

    /// Trial-divides the numerator by each denominator factor and divides
    /// out the integer content.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.scale = BigInt::one();
            self.den.clear();
            return;
        }
        let keys: Vec<IntPoly> = self.den.keys().cloned().collect();
        for f in keys {
            while let Some(k) = self.den.get(&f).copied() {
                match self.num.div_exact(&f) {
                    Some(quot) => {
                        self.num = quot;
                        if k == 1 {
                            self.den.remove(&f);
                        } else {
                            self.den.insert(f.clone(), k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
        let g = self.num.content().gcd(&self.scale);
        if !g.is_one() {
            self.num = self.num.div_scalar_exact(&g);
            self.scale /= g;
        }
    }

    pub fn mul(&self, other: &FactoredFraction) -> FactoredFraction {
        if self.is_zero() || other.is_zero() {
            return FactoredFraction::zero();
        }
        let mut den = self.den.clone();
        for (p, k) in &other.den {
            *den.entry(p.clone()).or_default() += k;
        }
        let mut out = FactoredFraction {
            num: &self.num * &other.num,
            scale: &self.scale * &other.scale,
            den,
        };
        out.reduce();
        out
    }

    pub fn mul_rational(&self, r: &BigRational) -> FactoredFraction {
        self.mul(&FactoredFraction::from_rational(r))
    }

    pub fn neg(&self) -> FactoredFraction {
        FactoredFraction {
            num: -&self.num,
            scale: self.scale.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &FactoredFraction) -> FactoredFraction {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (p, k) in &other.den {
            let e = den.entry(p.clone()).or_default();
            *e = (*e).max(*k);
        }
        let scale = self.scale.lcm(&other.scale);
        let lift = |x: &FactoredFraction| {
            let mut n = x.num.scale(&(&scale / &x.scale));
            for (p, k) in &den {
                let have = x.den.get(p).copied().unwrap_or(0);
                if *k > have {
                    n = n * p.pow(k - have);
                }
            }
            n
        };
        let mut out = FactoredFraction {
            num: lift(self) + lift(other),
            scale,
            den,
        };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &FactoredFraction) -> FactoredFraction {
        self.add(&other.neg())
    }

    pub fn recip(&self) -> Result<FactoredFraction> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        FactoredFraction::with_factors(self.den_product(), [self.num.clone()])
    }

    pub fn div(&self, other: &FactoredFraction) -> Result<FactoredFraction> {
        Ok(self.mul(&other.recip()?))
    }
}

impl fmt::Display for FactoredFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() && self.scale.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})", self.num)?;
        write!(f, " / ")?;
        if !self.scale.is_one() {
            write!(f, "{}", self.scale)?;
        }
        for (p, k) in &self.den {
            write!(f, "({p})")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}
