//! Degree growth of monomial and rational maps of projective space.
//!
//! The library computes, exactly where the mathematics is exact and with
//! certified numerics where it is not:
//!
//! - exact big-integer linear algebra (powers, determinants,
//!   characteristic polynomials, compound matrices) — [`linalg`];
//! - the piecewise-linear degree formula for monomial maps, homogenized
//!   exponent matrices, degree/chamber sequences, and signature dynamics
//!   — [`monomial`];
//! - algebraic entropy, toral entropy, and conjectural dynamical degrees
//!   with two independent computation routes — [`spectral`];
//! - minimal linear recurrences over exact rationals (Berlekamp-Massey)
//!   and piecewise-linear integer recurrences — [`recurrence`];
//! - sparse multivariate rational-function arithmetic with factored
//!   denominators, an expression parser, and tropicalization —
//!   [`poly`], [`ratfn`], [`parse`];
//! - composition, iteration, and projectivization of rational maps with
//!   exact degree sequences — [`ratmap`];
//! - max-plus piecewise-linear dynamics with exact-LP canonicalization —
//!   [`tropical`], [`lp`];
//! - JSON wire formats with big integers as decimal strings — [`jsonio`].

pub mod bigutil;
pub mod error;
pub mod jsonio;
pub mod linalg;
pub mod lp;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod ratmap;
pub mod recurrence;
pub mod roots;
pub mod spectral;
pub mod tropical;

#[cfg(test)]
pub(crate) mod testdata;

pub use error::{Error, Result};
