//! Exact enumeration of the positive rationals along trees and forests of
//! Möbius transformations, together with the height machinery that measures
//! how much of ℙ¹(ℚ) such an enumeration can reach.
//!
//! The library is organised around three circles of ideas:
//!
//! * the Calkin-Wilf tree and its algebraic skeleton, the free monoid of
//!   nonnegative unimodular 2×2 matrices ([`monoid`], [`tree`]);
//! * finite forests of Möbius maps that partition the positive rationals or
//!   the even-product rationals ([`chan`]);
//! * projective heights on ℙ¹(ℚ): exact bounded-height counting, height
//!   densities of subsets, and growth of heights along orbits of rational
//!   maps of degree ≥ 2 ([`heights`], [`maps`], [`orbit`]).
//!
//! All arithmetic on rationals, projective points, matrices and polynomial
//! maps is exact over arbitrary-precision integers; floating point appears
//! only in logarithmic heights and in reported ratios.
//!
//! ```
//! use qforest::{monoid, tree, Rational};
//!
//! // 3/5 sits at breadth-first index 9, behind the unique factorization
//! // L·R·L of its matrix.
//! let x = Rational::new(3, 5)?;
//! let m = monoid::omega_inverse(&x)?;
//! assert_eq!(monoid::decompose(&m)?.to_string(), "LRL");
//! assert_eq!(tree::rational_to_index(&x)?, 9u32.into());
//! assert_eq!(monoid::omega(&m), x);
//! # Ok::<(), qforest::Error>(())
//! ```

pub mod chan;
pub mod cli;
mod error;
pub mod heights;
pub mod maps;
pub mod monoid;
pub mod orbit;
mod poly;
pub mod rational;
pub mod report;
pub mod tree;

pub use error::Error;
pub use rational::{ProjPoint, Rational};
