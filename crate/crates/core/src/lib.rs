//! Algebraic geometry over finite groups.
//!
//! The crate answers questions about solution sets of group equations over a
//! finite group `G` given by its multiplication table:
//!
//! * [`group`] builds and validates finite groups, subgroups, and lower
//!   central series.
//! * [`words`] implements freely reduced words over `n` variables, optionally
//!   with constants from `G`, together with parsing, evaluation, and
//!   substitution.
//! * [`geometry`] solves equation systems exhaustively, computes radicals,
//!   closures, and coordinate groups of algebraic sets.
//! * [`radical`] decides whether the radical of an algebraic set is fully
//!   invariant, via the subgroup-decomposition criterion and via an exact
//!   endomorphism oracle, and relates that to invariance under automorphisms.
//! * [`gcoeff`] covers systems with coefficients: verbal subgroups of powers
//!   of `G`, and the correspondence between coordinate groups and relatively
//!   free groups.
//!
//! Everything is exhaustive and deterministic: identical inputs produce
//! byte-identical outputs regardless of the parallelism degree.

pub mod error;
pub mod gcoeff;
pub mod geometry;
pub mod group;
pub mod radical;
pub mod words;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
