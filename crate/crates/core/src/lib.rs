//! Exact enumeration of set partitions and machine verification of the
//! generating functions for the sum-of-weighted-records statistic.
//!
//! A set partition of `[n]` is handled in canonical sequential form (a
//! restricted growth string). For such a word, `swrec` sums
//! `position * value` over its left-to-right maxima. The crate builds the
//! bivariate generating function of `swrec` over partitions with exactly `k`
//! blocks, its `q`-derivative at `q = 1`, a partial-fraction form of that
//! derivative, the exponential generating function of the totals, the
//! Bell-number formula for the total, and its asymptotic estimate. Every one
//! of those objects is checked against brute-force enumeration in
//! [`verify`].
//!
//! All combinatorial quantities are exact ([`Integer`], [`Rational`]).
//! Floating point appears only in [`asymptotics`].

pub mod asymptotics;
pub mod closed_form;
mod error;
pub mod exact;
pub mod gf;
pub mod setpart;
pub mod verify;

pub use asymptotics::{AsymptoticReport, Magnitude};
pub use closed_form::BellStirlingTables;
pub use error::{Error, Result};
pub use exact::{BiSeries, Integer, Rational, UniSeries};
pub use gf::PartialFractionDecomposition;
pub use setpart::{BlockPartition, RecordEntry, RestrictedGrowthString};
pub use verify::{Suite, VerificationOutcome, VerifyConfig};
