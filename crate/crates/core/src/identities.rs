//! Both sides of the three hook/content product identities:
//!
//! ```text
//! integer:     Π_b (n + c(b)) / h(b)              = Π_{i<j} (λ_i - λ_j + j - i) / (j - i)
//! polynomial:  Π_b (1 - t^(n+c(b))) / (1 - t^h(b)) = Π_{i<j} (1 - t^(λ_i-λ_j+j-i)) / (1 - t^(j-i))
//! elliptic:    Π_b (1 - q^coarm t^(n-coleg)) / (1 - q^arm t^(leg+1))
//!                  = Π_{i<j} Π_{r=0}^{λ_i-λ_j-1} (1 - q^r t^(j-i+1)) / (1 - q^r t^(j-i))
//! ```
//!
//! plus the factor table that turns the right-hand side of the elliptic
//! identity into the left-hand side by telescoping each cell and then
//! padding every box with a balanced pair of factors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{FactorBag, FactorSet, IntPoly, QTFactor, QTFraction};
use crate::error::{Error, Result};
use crate::partition::{BoxCoord, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Integer,
    Polynomial,
    Elliptic,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Integer, Level::Polynomial, Level::Elliptic];

    pub fn name(self) -> &'static str {
        match self {
            Level::Integer => "integer",
            Level::Polynomial => "polynomial",
            Level::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Level::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown level {s:?}")))
    }
}

fn factor(a: usize, b: usize) -> QTFactor {
    QTFactor::new(a as u32, b as u32).expect("identity factors have positive t-exponent")
}

/// Pairs `(i, j)` with `1 ≤ i < j ≤ n`.
fn row_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

pub fn integer_lhs(lambda: &Partition, n: usize) -> Result<BigRational> {
    lambda.check_rows(n)?;
    let mut acc = BigRational::one();
    for (_, s) in lambda.all_box_stats() {
        acc *= BigRational::new(BigInt::from(n as i64 + s.content), BigInt::from(s.hook));
    }
    Ok(acc)
}

pub fn integer_rhs(lambda: &Partition, n: usize) -> Result<BigRational> {
    lambda.check_rows(n)?;
    let mut acc = BigRational::one();
    for (i, j) in row_pairs(n) {
        let steps = lambda.part(i) - lambda.part(j) + j - i;
        acc *= BigRational::new(BigInt::from(steps), BigInt::from(j - i));
    }
    Ok(acc)
}

pub fn poly_lhs(lambda: &Partition, n: usize) -> Result<FactorBag> {
    lambda.check_rows(n)?;
    let mut bag = FactorBag::one();
    for (_, s) in lambda.all_box_stats() {
        bag.num.insert(factor(0, (n as i64 + s.content) as usize));
        bag.den.insert(factor(0, s.hook));
    }
    Ok(bag)
}

pub fn poly_rhs(lambda: &Partition, n: usize) -> Result<FactorBag> {
    lambda.check_rows(n)?;
    let mut bag = FactorBag::one();
    for (i, j) in row_pairs(n) {
        bag.num.insert(factor(0, lambda.part(i) - lambda.part(j) + j - i));
        bag.den.insert(factor(0, j - i));
    }
    Ok(bag)
}

pub fn elliptic_lhs(lambda: &Partition, n: usize) -> Result<FactorBag> {
    lambda.check_rows(n)?;
    let mut bag = FactorBag::one();
    for (_, s) in lambda.all_box_stats() {
        bag.num.insert(factor(s.coarm, n - s.coleg));
        bag.den.insert(factor(s.arm, s.leg + 1));
    }
    Ok(bag)
}

pub fn elliptic_rhs(lambda: &Partition, n: usize) -> Result<FactorBag> {
    lambda.check_rows(n)?;
    let mut bag = FactorBag::one();
    for (i, j) in row_pairs(n) {
        for r in 0..lambda.part(i) - lambda.part(j) {
            bag.num.insert(factor(r, j - i + 1));
            bag.den.insert(factor(r, j - i));
        }
    }
    Ok(bag)
}

/// One right-hand-side factor `(1 - q^r t^(j-i+1)) / (1 - q^r t^(j-i))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFactor {
    pub j: usize,
    pub num: QTFactor,
    pub den: QTFactor,
}

/// All right-hand-side factors sharing a row `i` and a `q`-power `r`.
///
/// The cell sits in column `λ_i - r`, and its factors run over the suffix
/// of rows `j` with `λ_j < λ_i - r`, so their product telescopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCell {
    pub i: usize,
    pub r: usize,
    pub column: usize,
    /// Ordered by decreasing `j`.
    pub raw_factors: Vec<RawFactor>,
    pub cancelled: FactorBag,
}

impl EllipticCell {
    pub fn raw_bag(&self) -> FactorBag {
        let mut bag = FactorBag::one();
        for f in &self.raw_factors {
            bag.num.insert(f.num);
            bag.den.insert(f.den);
        }
        bag
    }

    /// Bookkeeping label of a factor in `rK + α_ij` form, e.g. `2K+α15`.
    pub fn label(&self, j: usize) -> String {
        let alpha = format!("α{}{}", self.i, j);
        match self.r {
            0 => alpha,
            1 => format!("K+{alpha}"),
            r => format!("{r}K+{alpha}"),
        }
    }
}

/// One position in a rendered stage of the factor table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub row: usize,
    pub col: usize,
    pub num: Option<QTFactor>,
    pub den: Option<QTFactor>,
    pub num_added: bool,
    pub den_added: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticTable {
    pub lambda: Partition,
    pub n: usize,
    /// Row-major, columns increasing within a row.
    pub cells: Vec<EllipticCell>,
}

pub fn elliptic_table(lambda: &Partition, n: usize) -> Result<EllipticTable> {
    lambda.check_rows(n)?;
    let mut cells = Vec::new();
    for i in 1..=n {
        let li = lambda.part(i);
        for column in 1..=li {
            let r = li - column;
            let raw_factors: Vec<RawFactor> = (i + 1..=n)
                .rev()
                .filter(|&j| r < li - lambda.part(j))
                .map(|j| RawFactor {
                    j,
                    num: factor(r, j - i + 1),
                    den: factor(r, j - i),
                })
                .collect();
            if raw_factors.is_empty() {
                continue;
            }
            let mut cell = EllipticCell {
                i,
                r,
                column,
                raw_factors,
                cancelled: FactorBag::one(),
            };
            cell.cancelled = cell.raw_bag().cancel();
            cells.push(cell);
        }
    }
    Ok(EllipticTable {
        lambda: lambda.clone(),
        n,
        cells,
    })
}

impl EllipticTable {
    pub fn cell(&self, i: usize, column: usize) -> Option<&EllipticCell> {
        self.cells.iter().find(|c| c.i == i && c.column == column)
    }

    pub fn raw_product(&self) -> FactorBag {
        self.cells
            .iter()
            .fold(FactorBag::one(), |acc, c| acc.mul(&c.raw_bag()))
    }

    pub fn cancelled_product(&self) -> FactorBag {
        self.cells
            .iter()
            .fold(FactorBag::one(), |acc, c| acc.mul(&c.cancelled))
    }

    /// Cancelled cells with each row's numerators reversed left to right,
    /// so the numerator with `q^r` lands in column `r + 1`.
    pub fn reversed(&self) -> Vec<TableEntry> {
        let mut entries = Vec::new();
        for i in 1..=self.n {
            let row: Vec<&EllipticCell> = self.cells.iter().filter(|c| c.i == i).collect();
            let width = self.lambda.part(i);
            for col in 1..=width {
                let den_cell = row.iter().find(|c| c.column == col);
                let num_cell = row.iter().find(|c| c.r + 1 == col);
                let single = |s: &FactorSet| s.iter().next();
                let num = num_cell.and_then(|c| single(&c.cancelled.num));
                let den = den_cell.and_then(|c| single(&c.cancelled.den));
                if num.is_some() || den.is_some() {
                    entries.push(TableEntry {
                        row: i,
                        col,
                        num,
                        den,
                        num_added: false,
                        den_added: false,
                    });
                }
            }
        }
        entries
    }
}

/// Result of filling every box of the reversed table with the factors the
/// left-hand side expects there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    pub entries: Vec<TableEntry>,
    pub added_num: FactorSet,
    pub added_den: FactorSet,
}

impl Completion {
    /// Whether the added numerators and denominators agree as multisets,
    /// so that completion did not change the product.
    pub fn is_balanced(&self) -> bool {
        self.added_num == self.added_den
    }

    pub fn completed_bag(&self) -> FactorBag {
        let mut bag = FactorBag::one();
        for e in &self.entries {
            bag.num.extend(e.num);
            bag.den.extend(e.den);
        }
        bag
    }
}

pub fn elliptic_complete(table: &EllipticTable) -> Completion {
    let lambda = &table.lambda;
    let n = table.n;
    let reversed = table.reversed();
    let mut entries = Vec::new();
    let mut added_num = FactorSet::new();
    let mut added_den = FactorSet::new();
    for b in lambda.boxes() {
        let s = lambda.box_stats(b).expect("box of own diagram");
        let want_num = factor(s.coarm, n - s.coleg);
        let want_den = factor(s.arm, s.leg + 1);
        let present = reversed.iter().find(|e| e.row == b.row && e.col == b.col);
        let have_num = present.and_then(|e| e.num);
        let have_den = present.and_then(|e| e.den);
        let num_added = have_num.is_none();
        let den_added = have_den.is_none();
        if num_added {
            added_num.insert(want_num);
        }
        if den_added {
            added_den.insert(want_den);
        }
        entries.push(TableEntry {
            row: b.row,
            col: b.col,
            num: Some(have_num.unwrap_or(want_num)),
            den: Some(have_den.unwrap_or(want_den)),
            num_added,
            den_added,
        });
    }
    Completion {
        entries,
        added_num,
        added_den,
    }
}

/// A side of an identity: an exact rational (integer level) or a factor bag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdentityValue {
    Rational(String),
    Bag(FactorBag),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub level: Level,
    pub lambda: Partition,
    pub n: usize,
    pub equal: bool,
    pub lhs: IdentityValue,
    pub rhs: IdentityValue,
    /// Factor-multiset equality after cancellation; absent at integer level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fast_path: Option<bool>,
}

/// Checks one identity exactly.
///
/// At the polynomial and elliptic levels the authoritative answer is
/// cross-multiplication of the expanded sides; the factor-multiset
/// comparison is reported alongside.
pub fn verify(level: Level, lambda: &Partition, n: usize) -> Result<IdentityReport> {
    let (lhs, rhs, equal, fast_path) = match level {
        Level::Integer => {
            let l = integer_lhs(lambda, n)?;
            let r = integer_rhs(lambda, n)?;
            let eq = l == r;
            (
                IdentityValue::Rational(l.to_string()),
                IdentityValue::Rational(r.to_string()),
                eq,
                None,
            )
        }
        Level::Polynomial | Level::Elliptic => {
            let (l, r) = if level == Level::Polynomial {
                (poly_lhs(lambda, n)?, poly_rhs(lambda, n)?)
            } else {
                (elliptic_lhs(lambda, n)?, elliptic_rhs(lambda, n)?)
            };
            let fast = l.multiset_eq(&r);
            let slow = l.expand().frac_eq(&r.expand());
            if fast && !slow {
                return Err(Error::Internal(format!(
                    "factor multisets agree but expansions differ for {lambda}, n = {n}"
                )));
            }
            (IdentityValue::Bag(l), IdentityValue::Bag(r), slow, Some(fast))
        }
    };
    Ok(IdentityReport {
        level,
        lambda: lambda.clone(),
        n,
        equal,
        lhs,
        rhs,
        fast_path,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCase {
    pub lambda: Partition,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub level: Level,
    pub max_size: usize,
    pub max_n: usize,
    pub checked: usize,
    pub failures: Vec<SweepCase>,
    /// Cases where the expansion check passed but the multiset one did not.
    pub fast_path_misses: Vec<SweepCase>,
    /// Integer level only: left-hand sides that were not integers.
    pub non_integral: Vec<SweepCase>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.non_integral.is_empty()
    }
}

/// Every `(λ, n)` with `|λ| ≤ max_size` and `max(1, ℓ(λ)) ≤ n ≤ max_n`, in
/// deterministic order.
pub fn sweep_cases(max_size: usize, max_n: usize) -> Vec<(Partition, usize)> {
    Partition::all_up_to(max_size)
        .into_iter()
        .flat_map(|p| {
            let lo = p.length().max(1);
            (lo..=max_n).map(move |n| (p.clone(), n))
        })
        .collect()
}

pub fn sweep(level: Level, max_size: usize, max_n: usize) -> Result<SweepSummary> {
    let cases = sweep_cases(max_size, max_n);
    let results: Vec<(IdentityReport, bool)> = cases
        .par_iter()
        .map(|(lambda, n)| {
            let report = verify(level, lambda, *n)?;
            let integral = match level {
                Level::Integer => integer_lhs(lambda, *n)?.is_integer(),
                _ => true,
            };
            Ok((report, integral))
        })
        .collect::<Result<_>>()?;
    let mut summary = SweepSummary {
        level,
        max_size,
        max_n,
        checked: results.len(),
        failures: Vec::new(),
        fast_path_misses: Vec::new(),
        non_integral: Vec::new(),
    };
    for (report, integral) in results {
        let case = SweepCase {
            lambda: report.lambda.clone(),
            n: report.n,
        };
        if !report.equal {
            summary.failures.push(case.clone());
        }
        if report.equal && report.fast_path == Some(false) {
            summary.fast_path_misses.push(case.clone());
        }
        if !integral {
            summary.non_integral.push(case);
        }
    }
    Ok(summary)
}

/// `t → 1` limit of a bag of `1 - t^k` factors, taken one factor at a time
/// by pairing each with `1 - t`: every `(1 - t^k) / (1 - t)` tends to `k`.
///
/// Fails unless numerator and denominator have equally many factors, since
/// otherwise the limit is zero or a pole.
pub fn bag_limit_t1(bag: &FactorBag) -> Result<BigRational> {
    if bag.num.len() != bag.den.len() {
        return Err(Error::Pole(format!(
            "{} numerator factors against {} denominator factors",
            bag.num.len(),
            bag.den.len()
        )));
    }
    let one_minus_t = IntPoly::one_minus(0, 1);
    let ratio = |f: QTFactor| -> Result<BigRational> {
        let frac = QTFraction::new(f.to_poly(), one_minus_t.clone())?;
        frac.limit_t1()?
            .as_rational()
            .ok_or_else(|| Error::domain(format!("factor {f} still depends on q at t = 1")))
    };
    let mut acc = BigRational::one();
    for f in bag.num.iter() {
        acc *= ratio(f)?;
    }
    for f in bag.den.iter() {
        let r = ratio(f)?;
        if r.is_zero() {
            return Err(Error::Pole(format!("factor {f} vanishes at t = 1")));
        }
        acc /= r;
    }
    Ok(acc)
}

/// Box-by-box table of a statistic, used by diagram renderers.
pub fn box_grid<T>(lambda: &Partition, f: impl Fn(BoxCoord) -> T) -> Vec<Vec<T>> {
    (1..=lambda.length())
        .map(|i| (1..=lambda.part(i)).map(|j| f(BoxCoord::new(i, j))).collect())
        .collect()
}
