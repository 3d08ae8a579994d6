//! Exact verification of the hook/content product identities for integer
//! partitions, at three levels of generality (integer, `t`-polynomial and
//! `q,t`-"elliptic"), together with a desk-scale construction of symmetric
//! Macdonald polynomials whose principal specialization produces them.
//!
//! Module map:
//!
//! * [`partition`]: partitions, box diagrams and per-box statistics.
//! * [`arith`]: the exact kernel, i.e. sparse polynomials in `ℤ[q,t]`, their
//!   fraction field, and formal products of `1 - q^a t^b` factors.
//! * [`identities`]: both sides of each identity, equality checks and the
//!   factor-table cancellation pipeline.
//! * [`symfunc`]: symmetric functions, Macdonald polynomials, principal
//!   specialization and the degenerations to classical families.
//! * [`cli`]: the command-line front end used by the `hookbox` binary.

pub mod arith;
pub mod cli;
pub mod error;
pub mod identities;
pub mod partition;
pub mod symfunc;

pub use error::{Error, Result};
pub use partition::{BoxCoord, BoxStats, Partition};
