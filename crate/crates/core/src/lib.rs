//! Exact and high-precision verification of Jacobi theta function identities.
//!
//! The crate has two layers. The formal layer ([`qseries`], [`formal`],
//! [`arith`]) works with exact truncated series in `q^(1/24)` over ℤ\[i\] and
//! with integer sequences, so coefficient identities are either proved to a
//! given order or refuted at a concrete exponent. The numeric layer
//! ([`numeric`], [`qtrig`]) evaluates theta functions and Gosper's
//! q-trigonometric functions to arbitrary precision and checks identities in
//! several complex variables at seeded sample points.

pub mod arith;
pub mod error;
pub mod formal;
pub mod numeric;
pub mod qseries;
pub mod qtrig;

pub use error::{Error, Result};
