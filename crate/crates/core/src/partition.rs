//! Integer partitions, their box diagrams and the per-box statistics
//! (content, hook, arm, leg, coarm, coleg).
//!
//! Rows and columns are 1-based throughout. Whenever a formula ranges over
//! rows `1..=n` with `n` larger than the number of parts, the missing rows
//! are read as zero-length.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// A box position `(row, col)` in a diagram, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoxCoord {
    pub row: usize,
    pub col: usize,
}

impl BoxCoord {
    pub fn new(row: usize, col: usize) -> Self {
        BoxCoord { row, col }
    }
}

/// Statistics of a single box `b` of a diagram.
///
/// `arm`/`leg` count the boxes strictly right of / below `b`, and
/// `coarm`/`coleg` the boxes strictly left of / above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxStats {
    pub content: i64,
    pub hook: usize,
    pub arm: usize,
    pub leg: usize,
    pub coarm: usize,
    pub coleg: usize,
}

impl Partition {
    /// Builds a partition, rejecting zero parts and increases.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::domain(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The 1-based part `λ_i`, zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to exactly `n` entries.
    ///
    /// Fails when `n` is smaller than the length.
    pub fn padded(&self, n: usize) -> Result<Vec<usize>> {
        self.check_rows(n)?;
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Ok(v)
    }

    pub(crate) fn check_rows(&self, n: usize) -> Result<()> {
        if n < self.length() {
            return Err(Error::domain(format!(
                "n = {n} is smaller than the length {} of {self}",
                self.length()
            )));
        }
        Ok(())
    }

    /// All boxes in row-major order.
    pub fn boxes(&self) -> Vec<BoxCoord> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| BoxCoord::new(i + 1, j)))
            .collect()
    }

    pub fn contains(&self, b: BoxCoord) -> bool {
        b.row >= 1 && b.col >= 1 && b.col <= self.part(b.row)
    }

    /// The partition of column lengths.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    pub fn box_stats(&self, b: BoxCoord) -> Result<BoxStats> {
        if !self.contains(b) {
            return Err(Error::domain(format!(
                "box ({}, {}) is not in the diagram of {self}",
                b.row, b.col
            )));
        }
        let arm = self.part(b.row) - b.col;
        let leg = self.parts[b.row..].iter().take_while(|&&p| p >= b.col).count();
        let coarm = b.col - 1;
        let coleg = b.row - 1;
        Ok(BoxStats {
            content: coarm as i64 - coleg as i64,
            hook: arm + leg + 1,
            arm,
            leg,
            coarm,
            coleg,
        })
    }

    /// Statistics of every box, in the order of [`Partition::boxes`].
    pub fn all_box_stats(&self) -> Vec<(BoxCoord, BoxStats)> {
        self.boxes()
            .into_iter()
            .map(|b| (b, self.box_stats(b).expect("box of own diagram")))
            .collect()
    }

    /// Sorted multiset of all hook lengths.
    pub fn hooks(&self) -> Vec<usize> {
        let mut h: Vec<usize> = self.all_box_stats().iter().map(|(_, s)| s.hook).collect();
        h.sort_unstable();
        h
    }

    /// `n(λ) = Σ (i-1) λ_i`, the total coleg over all boxes.
    pub fn weighted_size(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Multiplicity of each part size, indexed by part size (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(1) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Dominance order: `self ⪰ other` when both have the same size and every
    /// partial sum of `self` is at least the corresponding one of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let rows = self.length().max(other.length());
        let (mut a, mut b) = (0, 0);
        for i in 1..=rows {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill_partitions(n, n, &mut current, &mut out);
        out
    }

    /// All partitions of size at most `max`, by size then decreasing lex order.
    pub fn all_up_to(max: usize) -> Vec<Partition> {
        (0..=max).flat_map(Partition::all_of_size).collect()
    }
}

fn fill_partitions(rest: usize, cap: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        current.push(p);
        fill_partitions(rest - p, p, current, out);
        current.pop();
    }
}

/// Hook lengths of row `i` together with the steps `λ_i - λ_j + j - i`
/// to every lower row `j ≤ n`, as a sorted multiset.
///
/// Together these walk the whole boundary path below row `i`, so the result
/// is always exactly `{1, 2, ..., λ_i + n - i}`.
pub fn row_ladder(lambda: &Partition, n: usize, i: usize) -> Result<Vec<usize>> {
    lambda.check_rows(n)?;
    if i == 0 || i > n {
        return Err(Error::domain(format!("row {i} is outside 1..={n}")));
    }
    let mut out: Vec<usize> = (1..=lambda.part(i))
        .map(|j| {
            lambda
                .box_stats(BoxCoord::new(i, j))
                .expect("box of own diagram")
                .hook
        })
        .collect();
    let li = lambda.part(i);
    out.extend((i + 1..=n).map(|j| li - lambda.part(j) + j - i));
    out.sort_unstable();
    Ok(out)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parses `5,4,4,3,2`, optionally wrapped in parentheses; `""` and `()` give
/// the empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| match e {
            Error::Domain(msg) => Error::Parse(msg),
            other => other,
        })
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}
