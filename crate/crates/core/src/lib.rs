//! Combinatorial machinery of 2-bridge link group presentations.
//!
//! A 2-bridge link is parametrized by a slope, an extended rational number
//! `q/p`. Its link group carries a one-relator upper presentation
//! `<a, b | u_r>` whose relator is read off the slope. This crate implements
//! the pieces needed to work with those presentations exactly:
//!
//! - [`rational`]: exact extended rationals, continued fraction normal
//!   forms, the well-ordering on expansions, and the interval endpoints
//!   `r1`, `r2` of a slope.
//! - [`word`]: freely and cyclically reduced words over `{a, b}` and the
//!   relator construction.
//! - [`sseq`]: S-sequences (run-length sequences of sign blocks), their
//!   recurrences, and the symmetric `((S1, S2, S1, S2))` decomposition.
//! - [`smallcancel`]: verification of the small cancellation conditions
//!   C(4) and T(4) for the symmetrized presentation.
//! - [`farey`]: reflection groups on the Farey tessellation boundary,
//!   orbit reduction to a fundamental set, and the null-homotopy decision
//!   for simple loops.
//!
//! All arithmetic is exact; integers are unbounded.

pub mod error;
pub mod farey;
pub mod rational;
pub mod smallcancel;
pub mod sseq;
pub mod word;

mod cyclic;

pub use error::Error;
pub use rational::{ContinuedFraction, ExtendedRational};
