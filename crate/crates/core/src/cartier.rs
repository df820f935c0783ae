//! Cartier-Manin matrices of hyperelliptic curves.
//!
//! For y^2 = f(x) over a field of odd characteristic p, with
//! genus g = ceil(deg f / 2) - 1, write
//!
//! ```text
//! f(x)^((p-1)/2) = sum_i  c_i x^i.
//! ```
//!
//! The Cartier-Manin matrix (the Hasse-Witt matrix of the Cartier operator
//! on regular differentials, in the standard basis x^(i-1) dx / y) is the
//! g x g matrix with entry (i, j) = c_(ip - j) for 1 <= i, j <= g. The curve
//! is superspecial precisely when the matrix is zero; that is the only
//! invariant the enumeration needs, and this module computes it by the
//! generic route (full power of f, selected coefficients), independent of
//! the per-family coefficient formulas it is tested against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::poly::{self, Poly};

/// A hyperelliptic model y^2 = f(x) with f square-free of degree >= 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticModel {
    f: Poly,
}

impl HyperellipticModel {
    pub fn new(fd: &FieldDesc, f: Poly) -> Result<HyperellipticModel> {
        let f = poly::lift(fd, &f)?;
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg < 3 {
            return Err(Error::InvalidDegree(deg));
        }
        if !poly::is_separable(fd, &f)? {
            return Err(Error::NotSquareFree);
        }
        Ok(HyperellipticModel { f })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("validated nonzero")
    }

    /// ceil(deg/2) - 1: both the odd model (2g+1) and the even model (2g+2)
    /// reduce to (deg - 1) / 2.
    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }
}

/// Dense g x g Cartier-Manin matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CMMatrix {
    g: usize,
    /// Row-major; entries[i][j] is the coefficient of x^((i+1)p - (j+1)).
    entries: Vec<Vec<FieldElement>>,
}

impl CMMatrix {
    pub fn genus(&self) -> usize {
        self.g
    }

    /// Zero-based access: entry (i, j) of the matrix as displayed.
    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().all(|c| c.is_zero()))
    }
}

/// The Cartier-Manin matrix of the model over the coefficient field.
///
/// Indices ip - j beyond deg(f) * (p-1)/2 (possible only for tiny p) are
/// coefficients of terms that do not exist, i.e. zero.
pub fn cm_matrix(fd: &FieldDesc, model: &HyperellipticModel) -> Result<CMMatrix> {
    let p = fd.p();
    let e = (p - 1) / 2;
    let g = model.genus();
    let bound = model.degree() * e as usize;
    let mut wanted = Vec::with_capacity(g * g);
    for i in 1..=g as u64 {
        for j in 1..=g as u64 {
            let idx = (i * p - j) as usize;
            if idx <= bound {
                wanted.push(idx);
            }
        }
    }
    let coeffs = poly::power_coeffs(fd, model.f(), e, &wanted)?;
    let mut by_index = std::collections::HashMap::new();
    for (w, c) in wanted.iter().zip(coeffs) {
        by_index.insert(*w, c);
    }
    let entries = (1..=g as u64)
        .map(|i| {
            (1..=g as u64)
                .map(|j| {
                    by_index
                        .get(&((i * p - j) as usize))
                        .cloned()
                        .unwrap_or_else(|| fd.zero())
                })
                .collect()
        })
        .collect();
    Ok(CMMatrix { g, entries })
}

/// Superspecial means the Cartier-Manin matrix vanishes identically.
pub fn is_superspecial(fd: &FieldDesc, model: &HyperellipticModel) -> Result<bool> {
    Ok(cm_matrix(fd, model)?.is_zero())
}
