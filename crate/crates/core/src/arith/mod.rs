//! Exact arithmetic in `ℤ[q, t]` and its fraction field.

pub mod bag;
pub mod factored;
pub mod frac;
pub mod poly;

pub use bag::{FactorBag, FactorSet, QTFactor};
pub use factored::FactoredFraction;
pub use frac::QTFraction;
pub use poly::{Exponent, IntPoly, Locus, Subst};
