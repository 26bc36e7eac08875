//! Markov traces on Iwahori-Hecke algebras of types A, B and D.
//!
//! The crate computes the two-variable trace three ways (the type-A Markov
//! recursion, an exact solver for the trace axioms in types B and D, and the
//! expansion in Hecke characters weighted by bigraded Molien series) and
//! derives Kazhdan-Lusztig polynomials, Hochschild-homology Poincare series of
//! Soergel bimodules and HOMFLYPT invariants of braid closures from it.

pub mod charexp;
pub mod coeff;
pub mod coxeter;
pub mod error;
pub mod expr;
pub mod hecke;
pub mod homfly;
pub mod oracle;
pub mod selftest;
pub mod trace;

pub use coeff::{BiLaurent, RatFn, SeriesWindow};
pub use error::{Error, Result};
