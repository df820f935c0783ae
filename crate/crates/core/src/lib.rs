//! Superspecial hyperelliptic curves of genus 4 whose reduced automorphism
//! group properly contains the Klein four-group V4.
//!
//! Over a field of odd characteristic p, a curve y^2 = f(x) is superspecial
//! exactly when its Cartier-Manin matrix vanishes; the entries of that matrix
//! are coefficients of f^((p-1)/2). Genus-4 curves with reduced automorphism
//! group strictly containing V4 fall into a handful of one-parameter families
//! (dihedral D4, D8, D10 and two exceptional groups), and for each family the
//! superspecial members are cut out by explicit coefficient polynomials in
//! the family parameter. This crate implements:
//!
//! * the quadratic tower F_p through F_{p^8} ([`fields`]) and dense
//!   univariate polynomial arithmetic including root finding ([`poly`]);
//! * truncated hypergeometric series and the coefficient polynomials of
//!   f^((p-1)/2) for the relevant families ([`hypergeom`]);
//! * Cartier-Manin matrices for arbitrary hyperelliptic models ([`cartier`]);
//! * the genus-2 Rosenhain machinery that feeds the D4 family ([`genus2`]);
//! * enumeration, counting and isomorphism classification for the D8, D10
//!   and D4 families ([`family_d8`], [`family_d10`], [`family_d4`]);
//! * isomorphism testing of genus-4 models via branch loci ([`iso4`]);
//! * the orchestration layer used by the `ssp4` binary ([`app`]).

pub mod app;
pub mod cartier;
pub mod error;
pub mod family_d10;
pub mod family_d4;
pub mod family_d8;
pub mod fields;
pub mod genus2;
pub mod hypergeom;
pub mod iso4;
pub mod poly;

pub use error::{Error, Result};
