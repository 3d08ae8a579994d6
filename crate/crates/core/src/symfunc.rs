//! Symmetric functions at small degree and the Macdonald polynomials `P_λ`.
//!
//! Everything is expressed in the monomial basis `m_μ`. The `q,t` scalar
//! product is diagonal in power sums, so [`GramData`] stores the exact change
//! of basis between `m` and `p` together with the power-sum norms; `P_λ` then
//! comes out of Gram–Schmidt along a linear extension of dominance order.
//!
//! Degree-`d` functions are expanded in exactly `d` variables whenever an
//! explicit polynomial is needed, which loses no information in degree `d`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{FactoredFraction, IntPoly, Locus, QTFraction};
use crate::error::{Error, Result};
use crate::identities::elliptic_lhs;
use crate::partition::{BoxCoord, Partition};

/// Default largest degree for which Macdonald polynomials are built.
pub const DEFAULT_DEGREE_CAP: usize = 8;

/// Environment variable overriding [`DEFAULT_DEGREE_CAP`].
pub const DEGREE_CAP_ENV: &str = "HOOKBOX_DEGREE_CAP";

/// The degree cap in effect: `HOOKBOX_DEGREE_CAP` if set and valid, else the
/// default.
pub fn degree_cap() -> usize {
    std::env::var(DEGREE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

fn check_cap(d: usize, cap: usize) -> Result<()> {
    if d > cap {
        return Err(Error::Resource(format!(
            "degree {d} exceeds the cap {cap} (set {DEGREE_CAP_ENV} to raise it)"
        )));
    }
    Ok(())
}

/// A polynomial with integer coefficients in `x_1, ..., x_nvars`, keyed by
/// exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl XPoly {
    pub fn zero(nvars: usize) -> Self {
        XPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = XPoly::zero(nvars);
        p.terms.insert(vec![0; nvars], BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Adds `c · x^exps`.
    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.nvars, "exponent vector of wrong length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        XPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    /// Value at `x_k = t^(k-1)`, as a polynomial in `t`.
    pub fn principal(&self) -> IntPoly {
        self.terms
            .iter()
            .map(|(e, c)| {
                let deg: u32 = e.iter().enumerate().map(|(k, a)| k as u32 * a).sum();
                IntPoly::monomial(c.clone(), 0, deg)
            })
            .sum()
    }

    /// Coefficient of each `m_μ`, read off at `x^μ`. Only meaningful when the
    /// polynomial is symmetric and homogeneous of degree `|μ|`, and
    /// `length(μ) ≤ nvars`.
    pub fn monomial_coeff(&self, mu: &Partition) -> BigInt {
        match mu.padded(self.nvars) {
            Ok(p) => self.coeff(&p.iter().map(|&x| x as u32).collect::<Vec<_>>()),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            &self.coeff(&sorted) == c
        })
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Largest exponent vector first, so x1^2 precedes x1 x2.
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, a)
                    }
                })
                .collect();
            let neg = c < &BigInt::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}")?;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}")?;
                }
                write!(f, "{}", mono.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Steps `v` to its next permutation in lexicographic order, returning
/// `false` (and leaving `v` sorted ascending) after the last one.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct rearrangement of `v`.
fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// The monomial symmetric polynomial `m_λ(x_1, ..., x_nvars)`.
pub fn monomial_expand(lambda: &Partition, nvars: usize) -> XPoly {
    let mut out = XPoly::zero(nvars);
    let Ok(padded) = lambda.padded(nvars) else {
        return out;
    };
    let padded: Vec<u32> = padded.iter().map(|&x| x as u32).collect();
    for perm in distinct_permutations(&padded) {
        out.add_term(perm, BigInt::one());
    }
    out
}

/// The power sum `p_ρ(x_1, ..., x_nvars)`.
pub fn power_sum_expand(rho: &Partition, nvars: usize) -> XPoly {
    let mut out = XPoly::one(nvars);
    for &k in rho.parts() {
        let mut pk = XPoly::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = k as u32;
            pk.add_term(e, BigInt::one());
        }
        out = out.mul(&pk);
    }
    out
}

/// The elementary product `e_λ = e_{λ_1} e_{λ_2} ...`, each factor built as
/// a sum over `λ_i`-element subsets of the variables.
pub fn elementary_expand(lambda: &Partition, nvars: usize) -> XPoly {
    let mut out = XPoly::one(nvars);
    for &k in lambda.parts() {
        let mut ek = XPoly::zero(nvars);
        let mut choice = vec![0u32; nvars];
        for slot in choice.iter_mut().rev().take(k) {
            *slot = 1;
        }
        if k <= nvars {
            loop {
                ek.add_term(choice.clone(), BigInt::one());
                if !next_permutation(&mut choice) {
                    break;
                }
            }
        }
        out = out.mul(&ek);
    }
    out
}

/// The Schur polynomial `s_λ(x_1, ..., x_n)` as a sum over semistandard
/// tableaux of shape `λ` with entries in `1..=n`.
pub fn schur_ssyt(lambda: &Partition, n: usize) -> XPoly {
    let mut out = XPoly::zero(n);
    let boxes = lambda.boxes();
    let mut filling: HashMap<BoxCoord, usize> = HashMap::new();
    let mut weight = vec![0u32; n];
    fill_tableaux(&boxes, 0, n, &mut filling, &mut weight, &mut out);
    out
}

fn fill_tableaux(
    boxes: &[BoxCoord],
    k: usize,
    n: usize,
    filling: &mut HashMap<BoxCoord, usize>,
    weight: &mut Vec<u32>,
    out: &mut XPoly,
) {
    if k == boxes.len() {
        out.add_term(weight.clone(), BigInt::one());
        return;
    }
    let b = boxes[k];
    let left = if b.col > 1 {
        filling[&BoxCoord::new(b.row, b.col - 1)]
    } else {
        1
    };
    let above = if b.row > 1 {
        filling[&BoxCoord::new(b.row - 1, b.col)] + 1
    } else {
        1
    };
    for v in left.max(above)..=n {
        filling.insert(b, v);
        weight[v - 1] += 1;
        fill_tableaux(boxes, k + 1, n, filling, weight, out);
        weight[v - 1] -= 1;
    }
    filling.remove(&b);
}

/// The basis in which a [`SymFunc`] is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "monomial")]
    Monomial,
    #[serde(rename = "powersum")]
    PowerSum,
    #[serde(rename = "elementary")]
    Elementary,
    #[serde(rename = "schur")]
    Schur,
    #[serde(rename = "macdonaldP")]
    MacdonaldP,
}

/// A homogeneous symmetric function with `q,t`-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SymFuncRepr", into = "SymFuncRepr")]
pub struct SymFunc {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, QTFraction>,
}

#[derive(Serialize, Deserialize)]
struct SymFuncRepr {
    degree: usize,
    basis: Basis,
    coeffs: Vec<CoeffRepr>,
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    mu: Partition,
    num: IntPoly,
    den: IntPoly,
}

impl TryFrom<SymFuncRepr> for SymFunc {
    type Error = Error;
    fn try_from(r: SymFuncRepr) -> Result<Self> {
        let mut f = SymFunc::zero(r.degree, r.basis);
        for c in r.coeffs {
            if f.coeffs.contains_key(&c.mu) {
                return Err(Error::Parse(format!("{} listed twice", c.mu)));
            }
            f.insert(c.mu, QTFraction::new(c.num, c.den)?)?;
        }
        Ok(f)
    }
}

impl From<SymFunc> for SymFuncRepr {
    fn from(f: SymFunc) -> Self {
        SymFuncRepr {
            degree: f.degree,
            basis: f.basis,
            coeffs: f
                .coeffs
                .into_iter()
                .rev()
                .map(|(mu, c)| {
                    let (num, den) = c.into_parts();
                    CoeffRepr { mu, num, den }
                })
                .collect(),
        }
    }
}

impl SymFunc {
    pub fn zero(degree: usize, basis: Basis) -> Self {
        SymFunc {
            degree,
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    /// The single basis element indexed by `lambda`.
    pub fn basis_element(lambda: &Partition, basis: Basis) -> Self {
        let mut f = SymFunc::zero(lambda.size(), basis);
        f.coeffs.insert(lambda.clone(), QTFraction::one());
        f
    }

    /// Reads the `m`-coordinates of an explicit symmetric polynomial of
    /// degree `degree` in at least `degree` variables.
    pub fn from_xpoly(p: &XPoly, degree: usize) -> Result<Self> {
        if p.nvars() < degree {
            return Err(Error::domain(format!(
                "{} variables cannot represent degree {degree} faithfully",
                p.nvars()
            )));
        }
        let mut f = SymFunc::zero(degree, Basis::Monomial);
        for mu in Partition::all_of_size(degree) {
            let c = p.monomial_coeff(&mu);
            if !c.is_zero() {
                f.coeffs.insert(mu, QTFraction::from_integer(c));
            }
        }
        Ok(f)
    }

    /// Sets a coefficient; zero removes the entry.
    pub fn insert(&mut self, mu: Partition, c: QTFraction) -> Result<()> {
        if mu.size() != self.degree {
            return Err(Error::domain(format!(
                "{mu} has size {} but the function has degree {}",
                mu.size(),
                self.degree
            )));
        }
        if c.is_zero() {
            self.coeffs.remove(&mu);
        } else {
            self.coeffs.insert(mu, c);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, mu: &Partition) -> QTFraction {
        self.coeffs.get(mu).cloned().unwrap_or_else(QTFraction::zero)
    }

    /// Nonzero coefficients, dominance-largest first.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Partition, &QTFraction)> + '_ {
        self.coeffs.iter().rev()
    }

    pub fn support(&self) -> impl Iterator<Item = &Partition> + '_ {
        self.coeffs.keys().rev()
    }

    /// Applies `g` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, g: impl Fn(&QTFraction) -> Result<QTFraction>) -> Result<SymFunc> {
        let mut out = SymFunc::zero(self.degree, self.basis);
        for (mu, c) in &self.coeffs {
            out.insert(mu.clone(), g(c)?)?;
        }
        Ok(out)
    }

    fn require_monomial(&self) -> Result<()> {
        if self.basis != Basis::Monomial {
            return Err(Error::domain("expected a function in the monomial basis"));
        }
        Ok(())
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
            Basis::Elementary => "e",
            Basis::Schur => "s",
            Basis::MacdonaldP => "P",
        };
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs()
            .map(|(mu, c)| {
                if c == &QTFraction::one() {
                    format!("{sym}{mu}")
                } else {
                    format!("[{c}] {sym}{mu}")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A linear extension of dominance order, used to sequence Gram–Schmidt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LinearExtension {
    /// Increasing lexicographic order.
    #[default]
    ReverseLex,
    /// Decreasing `n(μ)`, ties broken by decreasing lexicographic order.
    WeightedSize,
}

impl LinearExtension {
    pub const ALL: [LinearExtension; 2] = [LinearExtension::ReverseLex, LinearExtension::WeightedSize];

    /// The partitions of `d`, smallest first.
    pub fn order(self, d: usize) -> Vec<Partition> {
        let mut parts = Partition::all_of_size(d);
        match self {
            LinearExtension::ReverseLex => parts.reverse(),
            LinearExtension::WeightedSize => {
                parts.sort_by(|a, b| b.weighted_size().cmp(&a.weighted_size()).then(b.cmp(a)))
            }
        }
        parts
    }
}

/// Exact change of basis between monomials and power sums in one degree,
/// plus the power-sum norms of the `q,t` scalar product.
#[derive(Clone, Debug)]
pub struct GramData {
    degree: usize,
    extension: LinearExtension,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row `i`: `p_{partitions[i]}` in the `m` basis.
    p_to_m: Vec<Vec<BigInt>>,
    /// Row `i`: `m_{partitions[i]}` in the `p` basis.
    m_to_p: Vec<Vec<BigRational>>,
    z: Vec<BigInt>,
    norms: Vec<FactoredFraction>,
}

/// `z_μ = Π_k k^{m_k} m_k!`.
pub fn z_factor(mu: &Partition) -> BigInt {
    let mut z = BigInt::one();
    for (k, &m) in mu.multiplicities().iter().enumerate().skip(1) {
        for j in 1..=m {
            z *= BigInt::from(k) * BigInt::from(j);
        }
    }
    z
}

/// `⟨p_μ, p_μ⟩ = z_μ Π (1 - q^{μ_i}) / (1 - t^{μ_i})`.
pub fn power_sum_norm(mu: &Partition) -> FactoredFraction {
    let num: IntPoly = mu
        .parts()
        .iter()
        .map(|&k| IntPoly::one_minus(k as u32, 0))
        .product::<IntPoly>()
        .scale(&z_factor(mu));
    FactoredFraction::with_factors(num, mu.parts().iter().map(|&k| IntPoly::one_minus(0, k as u32)))
        .expect("1 - t^k is nonzero for k ≥ 1")
}

fn invert_rational(a: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Internal("power-sum transition matrix is singular".into()))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let dm = &f * &m[col][j];
                m[r][j] -= dm;
                let di = &f * &inv[col][j];
                inv[r][j] -= di;
            }
        }
    }
    Ok(inv)
}

impl GramData {
    pub fn new(d: usize, cap: usize, extension: LinearExtension) -> Result<Self> {
        check_cap(d, cap)?;
        let partitions = extension.order(d);
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let p_to_m: Vec<Vec<BigInt>> = partitions
            .iter()
            .map(|rho| {
                let x = power_sum_expand(rho, d);
                partitions.iter().map(|mu| x.monomial_coeff(mu)).collect()
            })
            .collect();
        let as_rat: Vec<Vec<BigRational>> = p_to_m
            .iter()
            .map(|row| row.iter().map(|c| BigRational::from_integer(c.clone())).collect())
            .collect();
        let m_to_p = invert_rational(&as_rat)?;
        let z = partitions.iter().map(z_factor).collect();
        let norms = partitions.iter().map(power_sum_norm).collect();
        Ok(GramData {
            degree: d,
            extension,
            partitions,
            index,
            p_to_m,
            m_to_p,
            z,
            norms,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn extension(&self) -> LinearExtension {
        self.extension
    }

    /// Partitions of the degree in the chosen linear extension, smallest first.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, mu: &Partition) -> Option<usize> {
        self.index.get(mu).copied()
    }

    pub fn p_to_m(&self) -> &[Vec<BigInt>] {
        &self.p_to_m
    }

    pub fn m_to_p(&self) -> &[Vec<BigRational>] {
        &self.m_to_p
    }

    pub fn z(&self) -> &[BigInt] {
        &self.z
    }

    pub fn norms(&self) -> &[FactoredFraction] {
        &self.norms
    }

    /// Converts `m`-coordinates (indexed like [`Self::partitions`]) to
    /// `p`-coordinates.
    pub fn to_power_sums(&self, m: &[FactoredFraction]) -> Vec<FactoredFraction> {
        let n = self.partitions.len();
        (0..n)
            .map(|rho| {
                m.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .fold(FactoredFraction::zero(), |acc, (mu, c)| {
                        let b = &self.m_to_p[mu][rho];
                        if b.is_zero() {
                            acc
                        } else {
                            acc.add(&c.mul_rational(b))
                        }
                    })
            })
            .collect()
    }

    /// `⟨f, g⟩` for two functions given by `p`-coordinates.
    pub fn inner_p(&self, f: &[FactoredFraction], g: &[FactoredFraction]) -> FactoredFraction {
        f.iter()
            .zip(g)
            .zip(&self.norms)
            .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
            .fold(FactoredFraction::zero(), |acc, ((a, b), w)| acc.add(&a.mul(b).mul(w)))
    }

    /// `⟨f, g⟩` for two monomial-basis functions of this degree.
    pub fn inner(&self, f: &SymFunc, g: &SymFunc) -> Result<FactoredFraction> {
        let fm = self.coords(f)?;
        let gm = self.coords(g)?;
        Ok(self.inner_p(&self.to_power_sums(&fm), &self.to_power_sums(&gm)))
    }

    /// `m`-coordinates of `f`, indexed like [`Self::partitions`].
    pub fn coords(&self, f: &SymFunc) -> Result<Vec<FactoredFraction>> {
        f.require_monomial()?;
        if f.degree() != self.degree {
            return Err(Error::domain(format!(
                "degree {} function against degree {} data",
                f.degree(),
                self.degree
            )));
        }
        let mut out = vec![FactoredFraction::zero(); self.partitions.len()];
        for (mu, c) in f.coeffs() {
            out[self.index[mu]] = FactoredFraction::from_qt(c)?;
        }
        Ok(out)
    }

    fn to_symfunc(&self, coords: &[FactoredFraction]) -> SymFunc {
        let mut f = SymFunc::zero(self.degree, Basis::Monomial);
        for (mu, c) in self.partitions.iter().zip(coords) {
            if !c.is_zero() {
                f.coeffs.insert(mu.clone(), c.to_qt().normalize_content());
            }
        }
        f
    }
}

/// Every `P_μ` of one degree, in `m`-coordinates, for one linear extension.
#[derive(Debug)]
pub struct MacdonaldBasis {
    gram: GramData,
    m_coords: Vec<Vec<FactoredFraction>>,
    p_coords: Vec<Vec<FactoredFraction>>,
    norms: Vec<FactoredFraction>,
}

impl MacdonaldBasis {
    /// Gram–Schmidt: `P_λ = m_λ - Σ ⟨m_λ, P_μ⟩ / ⟨P_μ, P_μ⟩ · P_μ` over every
    /// `μ` earlier in the linear extension.
    pub fn build(d: usize, cap: usize, extension: LinearExtension) -> Result<Self> {
        let gram = GramData::new(d, cap, extension)?;
        let len = gram.partitions.len();
        let mut m_coords: Vec<Vec<FactoredFraction>> = Vec::with_capacity(len);
        let mut p_coords: Vec<Vec<FactoredFraction>> = Vec::with_capacity(len);
        // P_j's p-coordinates weighted by the power-sum norms.
        let mut weighted: Vec<Vec<FactoredFraction>> = Vec::with_capacity(len);
        let mut norms: Vec<FactoredFraction> = Vec::with_capacity(len);
        let mut norm_inv: Vec<FactoredFraction> = Vec::with_capacity(len);
        for k in 0..len {
            let mut mk = vec![FactoredFraction::zero(); len];
            mk[k] = FactoredFraction::one();
            let mut pk: Vec<FactoredFraction> =
                gram.m_to_p[k].iter().map(FactoredFraction::from_rational).collect();
            for j in 0..k {
                let ip = gram.m_to_p[k]
                    .iter()
                    .zip(&weighted[j])
                    .filter(|(b, w)| !b.is_zero() && !w.is_zero())
                    .fold(FactoredFraction::zero(), |acc, (b, w)| acc.add(&w.mul_rational(b)));
                if ip.is_zero() {
                    continue;
                }
                let c = ip.mul(&norm_inv[j]);
                for (x, y) in mk.iter_mut().zip(&m_coords[j]) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
                for (x, y) in pk.iter_mut().zip(&p_coords[j]) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
            let wk: Vec<FactoredFraction> = pk.iter().zip(&gram.norms).map(|(a, w)| a.mul(w)).collect();
            let nk = gram.m_to_p[k]
                .iter()
                .zip(&wk)
                .filter(|(b, w)| !b.is_zero() && !w.is_zero())
                .fold(FactoredFraction::zero(), |acc, (b, w)| acc.add(&w.mul_rational(b)));
            let inv = nk.recip().map_err(|_| {
                Error::Internal(format!("P{} has zero norm", gram.partitions[k]))
            })?;
            m_coords.push(mk);
            p_coords.push(pk);
            weighted.push(wk);
            norms.push(nk);
            norm_inv.push(inv);
        }
        Ok(MacdonaldBasis {
            gram,
            m_coords,
            p_coords,
            norms,
        })
    }

    pub fn gram(&self) -> &GramData {
        &self.gram
    }

    fn index(&self, lambda: &Partition) -> Result<usize> {
        self.gram
            .index_of(lambda)
            .ok_or_else(|| Error::domain(format!("{lambda} is not of degree {}", self.gram.degree)))
    }

    /// `P_λ` in the monomial basis.
    pub fn p(&self, lambda: &Partition) -> Result<SymFunc> {
        Ok(self.gram.to_symfunc(&self.m_coords[self.index(lambda)?]))
    }

    /// `m`-coordinates of `P_λ` before conversion to plain fractions.
    pub fn m_coords(&self, lambda: &Partition) -> Result<&[FactoredFraction]> {
        Ok(&self.m_coords[self.index(lambda)?])
    }

    pub fn p_coords(&self, lambda: &Partition) -> Result<&[FactoredFraction]> {
        Ok(&self.p_coords[self.index(lambda)?])
    }

    /// `⟨P_λ, P_λ⟩`.
    pub fn norm(&self, lambda: &Partition) -> Result<&FactoredFraction> {
        Ok(&self.norms[self.index(lambda)?])
    }

    /// `⟨P_λ, P_μ⟩`, recomputed from the power-sum coordinates.
    pub fn pairing(&self, lambda: &Partition, mu: &Partition) -> Result<FactoredFraction> {
        Ok(self
            .gram
            .inner_p(&self.p_coords[self.index(lambda)?], &self.p_coords[self.index(mu)?]))
    }
}

type BasisCache = Mutex<HashMap<(usize, LinearExtension), Arc<OnceLock<Arc<MacdonaldBasis>>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The shared, lazily built basis for degree `d`. Concurrent callers for the
/// same degree wait for a single construction.
pub fn macdonald_basis(d: usize, extension: LinearExtension) -> Result<Arc<MacdonaldBasis>> {
    check_cap(d, degree_cap())?;
    let slot = {
        let mut map = basis_cache().lock().expect("cache lock poisoned");
        map.entry((d, extension)).or_default().clone()
    };
    if let Some(b) = slot.get() {
        return Ok(b.clone());
    }
    let built = Arc::new(MacdonaldBasis::build(d, usize::MAX, extension)?);
    Ok(slot.get_or_init(|| built).clone())
}

/// `P_λ(x; q, t)` in the monomial basis.
pub fn macdonald_p(lambda: &Partition) -> Result<SymFunc> {
    macdonald_p_with(lambda, LinearExtension::default())
}

pub fn macdonald_p_with(lambda: &Partition, extension: LinearExtension) -> Result<SymFunc> {
    macdonald_basis(lambda.size(), extension)?.p(lambda)
}

/// `m_μ(1, t, ..., t^(n-1))`.
pub fn principal_monomial(mu: &Partition, n: usize) -> IntPoly {
    monomial_expand(mu, n).principal()
}

/// Evaluates a monomial-basis function at `x_k = t^(k-1)`, `k = 1..=n`.
pub fn principal_specialize(f: &SymFunc, n: usize) -> Result<QTFraction> {
    f.require_monomial()?;
    if n == 0 {
        return Err(Error::domain("principal specialization needs n ≥ 1"));
    }
    let mut acc = FactoredFraction::zero();
    for (mu, c) in f.coeffs() {
        let m = principal_monomial(mu, n);
        if m.is_zero() {
            continue;
        }
        acc = acc.add(&FactoredFraction::from_qt(c)?.mul(&FactoredFraction::from_poly(m)));
    }
    Ok(acc.to_qt())
}

/// Both sides of the principal-specialization comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalCheck {
    pub lambda: Partition,
    pub n: usize,
    pub principal: QTFraction,
    pub elliptic_lhs: QTFraction,
    /// `n(λ)`, the power of `t` separating the two sides.
    pub weighted_size: usize,
    /// `principal == elliptic_lhs`.
    pub literal_equal: bool,
    /// `principal == t^{n(λ)} · elliptic_lhs`.
    pub normalized_equal: bool,
}

pub fn principal_check(lambda: &Partition, n: usize) -> Result<PrincipalCheck> {
    lambda.check_rows(n)?;
    let principal = principal_specialize(&macdonald_p(lambda)?, n)?;
    let lhs = elliptic_lhs(lambda, n)?.expand();
    let nl = lambda.weighted_size();
    let shifted = QTFraction::new(lhs.num().shift(0, nl as u32), lhs.den().clone())?;
    Ok(PrincipalCheck {
        lambda: lambda.clone(),
        n,
        literal_equal: principal.frac_eq(&lhs),
        normalized_equal: principal.frac_eq(&shifted),
        principal,
        elliptic_lhs: lhs,
        weighted_size: nl,
    })
}

/// Whether `P_λ(1, t, ..., t^(n-1); q, t)` equals the expanded elliptic
/// left-hand side, compared exactly as written with no normalization.
pub fn verify_principal_vs_elliptic(lambda: &Partition, n: usize) -> Result<bool> {
    Ok(principal_check(lambda, n)?.literal_equal)
}

/// Whether `P_λ(1, t, ..., t^(n-1); q, t) = t^{n(λ)} · elliptic_lhs(λ, n)`.
pub fn verify_principal_vs_elliptic_normalized(lambda: &Partition, n: usize) -> Result<bool> {
    Ok(principal_check(lambda, n)?.normalized_equal)
}

/// Restricts every coefficient of `P_λ` to one of the five loci, cancelling
/// removable singularities along the locus first.
pub fn specialize_family(lambda: &Partition, which: Locus) -> Result<SymFunc> {
    specialize_symfunc(&macdonald_p(lambda)?, which)
}

pub fn specialize_symfunc(f: &SymFunc, which: Locus) -> Result<SymFunc> {
    f.map_coeffs(|c| reduce(&c.specialize(which)?))
}

/// Cancels binomial factors of the denominator that divide the numerator.
fn reduce(c: &QTFraction) -> Result<QTFraction> {
    Ok(FactoredFraction::from_qt(c)?.to_qt().normalize_content())
}

/// `s_λ` in the monomial basis, from tableaux in `|λ|` variables.
pub fn schur_m_coords(lambda: &Partition) -> SymFunc {
    let d = lambda.size();
    SymFunc::from_xpoly(&schur_ssyt(lambda, d), d).expect("d variables suffice")
}

/// `e_λ` in the monomial basis, from subset products in `|λ|` variables.
pub fn elementary_m_coords(lambda: &Partition) -> SymFunc {
    let d = lambda.size();
    SymFunc::from_xpoly(&elementary_expand(lambda, d), d).expect("d variables suffice")
}

impl FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown basis {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn frac(num: IntPoly, den: IntPoly) -> QTFraction {
        QTFraction::new(num, den).unwrap()
    }

    /// (1+q)(1-t)/(1-qt)
    fn p2_coeff() -> QTFraction {
        frac(
            (IntPoly::one() + IntPoly::q()) * IntPoly::one_minus(0, 1),
            IntPoly::one_minus(1, 1),
        )
    }

    #[test]
    fn monomial_examples() {
        let e2 = monomial_expand(&part(&[1, 1]), 3);
        assert_eq!(e2.to_string(), "x1 x2 + x1 x3 + x2 x3");
        assert_eq!(monomial_expand(&part(&[2]), 2).to_string(), "x1^2 + x2^2");
        assert_eq!(monomial_expand(&part(&[3]), 2).to_string(), "x1^3 + x2^3");
        assert!(monomial_expand(&part(&[1, 1, 1]), 2).is_zero());
    }

    #[test]
    fn gram_small_degrees() {
        let g1 = GramData::new(1, 8, LinearExtension::ReverseLex).unwrap();
        assert_eq!(g1.p_to_m(), &[vec![BigInt::one()]]);
        let g2 = GramData::new(2, 8, LinearExtension::ReverseLex).unwrap();
        // order: (1,1), (2)
        assert_eq!(g2.partitions(), &[part(&[1, 1]), part(&[2])]);
        let int = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(g2.p_to_m()[0], int(&[2, 1]));
        assert_eq!(g2.p_to_m()[1], int(&[0, 1]));
        assert_eq!(g2.z(), &int(&[2, 2])[..]);
        assert!(matches!(
            GramData::new(9, 8, LinearExtension::ReverseLex),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn z_values() {
        assert_eq!(z_factor(&part(&[2, 2, 1])), BigInt::from(8));
        assert_eq!(z_factor(&part(&[1, 1, 1])), BigInt::from(6));
        assert_eq!(z_factor(&part(&[3])), BigInt::from(3));
    }

    #[test]
    fn small_macdonald() {
        let p1 = macdonald_p(&part(&[1])).unwrap();
        assert_eq!(p1, SymFunc::basis_element(&part(&[1]), Basis::Monomial));
        let p11 = macdonald_p(&part(&[1, 1])).unwrap();
        assert_eq!(p11, SymFunc::basis_element(&part(&[1, 1]), Basis::Monomial));
        let p2 = macdonald_p(&part(&[2])).unwrap();
        assert_eq!(p2.coeff(&part(&[2])), QTFraction::one());
        assert_eq!(p2.coeff(&part(&[1, 1])), p2_coeff());
        let p0 = macdonald_p(&Partition::empty()).unwrap();
        assert_eq!(p0.coeff(&Partition::empty()), QTFraction::one());
    }

    #[test]
    fn principal_examples() {
        let m2 = SymFunc::basis_element(&part(&[2]), Basis::Monomial);
        assert_eq!(
            principal_specialize(&m2, 2).unwrap(),
            QTFraction::from_poly(IntPoly::one() + IntPoly::monomial(1, 0, 2))
        );
        let p2 = macdonald_p(&part(&[2])).unwrap();
        let expect = frac(
            (IntPoly::one() + IntPoly::t()) * IntPoly::one_minus(1, 2),
            IntPoly::one_minus(1, 1),
        );
        assert_eq!(principal_specialize(&p2, 2).unwrap(), expect);
        assert!(verify_principal_vs_elliptic(&part(&[1]), 2).unwrap());
        assert!(verify_principal_vs_elliptic(&part(&[2]), 2).unwrap());
        // P_(1,1) = m_(1,1) specializes to t, the elliptic product to 1.
        let c = principal_check(&part(&[1, 1]), 2).unwrap();
        assert!(!c.literal_equal);
        assert!(c.normalized_equal);
        assert_eq!(c.principal, QTFraction::from_poly(IntPoly::t()));
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_ssyt(&part(&[2]), 2).to_string(), "x1^2 + x1 x2 + x2^2");
        assert_eq!(schur_ssyt(&part(&[1, 1]), 2).to_string(), "x1 x2");
        let s = schur_ssyt(&part(&[5, 4, 4, 3, 2]), 5);
        let total: BigInt = s.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigInt::from(175));
        assert!(s.is_symmetric());
    }

    #[test]
    fn family_examples() {
        let s2 = specialize_family(&part(&[2]), Locus::QEqualsT).unwrap();
        assert_eq!(s2, schur_m_coords(&part(&[2])));
        let m2 = specialize_family(&part(&[2]), Locus::TEqualsOne).unwrap();
        assert_eq!(m2, SymFunc::basis_element(&part(&[2]), Basis::Monomial));
        let e = specialize_family(&part(&[1, 1]), Locus::QEqualsOne).unwrap();
        assert_eq!(e, elementary_m_coords(&part(&[2])));
        let hl = specialize_family(&part(&[2]), Locus::QEqualsZero).unwrap();
        assert_eq!(hl.coeff(&part(&[1, 1])), QTFraction::from_poly(IntPoly::one_minus(0, 1)));
        let qw = specialize_family(&part(&[2]), Locus::TEqualsZero).unwrap();
        assert_eq!(qw.coeff(&part(&[1, 1])), QTFraction::from_poly(IntPoly::one() + IntPoly::q()));
    }

    #[test]
    fn elementary_oracle() {
        // e_2 e_1 = m_(2,1) + 3 m_(1,1,1)
        let e = elementary_m_coords(&part(&[2, 1]));
        assert_eq!(e.coeff(&part(&[2, 1])), QTFraction::from_integer(1));
        assert_eq!(e.coeff(&part(&[1, 1, 1])), QTFraction::from_integer(3));
        assert_eq!(e.coeff(&part(&[3])), QTFraction::zero());
    }

    #[test]
    fn json_round_trip() {
        let p2 = macdonald_p(&part(&[2])).unwrap();
        let s = serde_json::to_string(&p2).unwrap();
        assert!(s.starts_with(r#"{"degree":2,"basis":"monomial","coeffs":[{"mu":[2]"#));
        let back: SymFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p2);
        let bad = r#"{"degree":2,"basis":"monomial","coeffs":[{"mu":[3],"num":{"terms":[{"q":0,"t":0,"c":"1"}]},"den":{"terms":[{"q":0,"t":0,"c":"1"}]}}]}"#;
        assert!(serde_json::from_str::<SymFunc>(bad).is_err());
    }

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(distinct_permutations(&[1, 0, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
