//! Exact arithmetic, enumeration and verification tooling for diagonalizable
//! Thue inequalities `0 < |F(x, y)| <= h`, where
//! `F(x, y) = (αx + βy)^r - (γx + δy)^r` has integer coefficients.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: rationals, elements of `Q(√D)`, certified intervals and
//!   exact comparison of products of rational powers.
//! - [`poly`]: univariate rational polynomials and integral binary forms.
//! - [`forms`]: construction and invariants of diagonalizable forms.
//! - [`pade`]: the hypergeometric Padé approximants to `(1 - z)^{1/r}`.
//! - [`solver`]: primitive-solution enumeration, related-root classes and
//!   gap-principle audits.
//! - [`algseq`]: the algebraic numbers built from pairs of solutions.
//! - [`criteria`]: hypotheses and counting bounds of the main theorems.
//! - [`sweep`]: sweep specifications, reports and the verification driver.

pub mod algseq;
pub mod criteria;
pub mod error;
pub mod exactnum;
pub mod fault;
pub mod forms;
pub mod pade;
pub mod poly;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use exactnum::{QuadElem, Rational, RealInterval};
pub use forms::DiagForm;
