use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{IntPoly, Locus, Subst};
use crate::error::{Error, Result};

/// A rational function `num / den` in `q, t`.
///
/// No reduced form is maintained: two fractions are equal when
/// `n1 · d2 = n2 · d1` after exact expansion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QTFraction {
    num: IntPoly,
    den: IntPoly,
}

impl QTFraction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(QTFraction { num, den })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        QTFraction {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_integer(c: impl Into<BigInt>) -> Self {
        QTFraction::from_poly(IntPoly::constant(c))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        QTFraction {
            num: IntPoly::constant(r.numer().clone()),
            den: IntPoly::constant(r.denom().clone()),
        }
    }

    pub fn zero() -> Self {
        QTFraction::from_poly(IntPoly::zero())
    }

    pub fn one() -> Self {
        QTFraction::from_poly(IntPoly::one())
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn into_parts(self) -> (IntPoly, IntPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross-multiplication.
    pub fn frac_eq(&self, other: &QTFraction) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn recip(&self) -> Result<QTFraction> {
        QTFraction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &QTFraction) -> Result<QTFraction> {
        Ok(self * &other.recip()?)
    }

    pub fn subst(&self, q_to: &Subst, t_to: &Subst) -> Result<QTFraction> {
        QTFraction::new(self.num.subst(q_to, t_to), self.den.subst(q_to, t_to)).map_err(|_| {
            Error::Pole(format!("denominator {} vanishes identically", self.den))
        })
    }

    /// Restriction to a locus, cancelling any common power of the locus
    /// polynomial first so removable singularities evaluate correctly.
    ///
    /// Fails with [`Error::Pole`] when the denominator vanishes to higher
    /// order than the numerator.
    pub fn specialize(&self, locus: Locus) -> Result<QTFraction> {
        let (q_to, t_to) = locus.substitution();
        if self.num.is_zero() {
            return Ok(QTFraction::zero());
        }
        let (num_order, num) = self.num.order_along(locus)?;
        let (den_order, den) = self.den.order_along(locus)?;
        if den_order > num_order {
            return Err(Error::Pole(format!(
                "({self}) has a pole of order {} along {}",
                den_order - num_order,
                locus.label()
            )));
        }
        if num_order > den_order {
            return Ok(QTFraction::zero());
        }
        let den = den.subst(&q_to, &t_to);
        if den.is_zero() {
            return Err(Error::Internal(format!(
                "reduced denominator still vanishes on {}",
                locus.label()
            )));
        }
        Ok(QTFraction {
            num: num.subst(&q_to, &t_to),
            den,
        })
    }

    /// The `t → 1` limit: strips `(1 - t)` from both sides, then sets `t = 1`.
    /// The result involves `q` only.
    pub fn limit_t1(&self) -> Result<QTFraction> {
        self.specialize(Locus::TEqualsOne)
    }

    /// The value as a rational number, when both sides are constants.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(BigRational::new(n, d))
    }

    pub fn eval_f64(&self, q: f64, t: f64) -> f64 {
        self.num.eval_f64(q, t) / self.den.eval_f64(q, t)
    }

    /// Divides out the common integer content and makes the denominator's
    /// leading coefficient positive. Polynomial factors are left alone.
    pub fn normalize_content(&self) -> QTFraction {
        let g = num_integer::Integer::gcd(&self.num.content(), &self.den.content());
        let mut g = if g.is_zero() { BigInt::from(1) } else { g };
        if self.den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        QTFraction {
            num: self.num.div_scalar_exact(&g),
            den: self.den.div_scalar_exact(&g),
        }
    }
}

impl PartialEq for QTFraction {
    fn eq(&self, other: &Self) -> bool {
        self.frac_eq(other)
    }
}

impl Eq for QTFraction {}

impl From<IntPoly> for QTFraction {
    fn from(p: IntPoly) -> Self {
        QTFraction::from_poly(p)
    }
}

impl Add<&QTFraction> for &QTFraction {
    type Output = QTFraction;
    fn add(self, rhs: &QTFraction) -> QTFraction {
        if self.den == rhs.den {
            return QTFraction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        QTFraction {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub<&QTFraction> for &QTFraction {
    type Output = QTFraction;
    fn sub(self, rhs: &QTFraction) -> QTFraction {
        self + &(-rhs)
    }
}

impl Mul<&QTFraction> for &QTFraction {
    type Output = QTFraction;
    fn mul(self, rhs: &QTFraction) -> QTFraction {
        QTFraction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &QTFraction {
    type Output = QTFraction;
    fn neg(self) -> QTFraction {
        QTFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QTFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
