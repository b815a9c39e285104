//! Characteristic polynomials of Frobenius for simple supersingular abelian
//! varieties over `F_q`, `q = p^n` with `n` odd.
//!
//! Every supersingular Weil number has the form `sqrt(q) * zeta` for a root of
//! unity `zeta`. The crate enumerates those numbers as exact elements of
//! cyclotomic rings, computes their minimal polynomials, derives the
//! multiplicity and dimension from local invariants at `p`, and cross-checks
//! the result against closed-form family tables, a cyclotomic criterion on
//! `H(t)`, and brute-force point counts on Artin-Schreier curves.

pub mod curves;
pub mod cycring;
pub mod enumerate;
mod error;
pub mod expr;
pub mod hondatate;
pub mod numtheory;
pub mod papercheck;
pub mod report;
pub mod weil;

pub use error::{Error, Result};
pub use numtheory::{IntPoly, PrimePower};
