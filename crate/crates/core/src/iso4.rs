//! Isomorphism testing for genus-4 hyperelliptic curves over the algebraic
//! closure, by Mobius matching of branch loci.
//!
//! In odd characteristic, two hyperelliptic curves y^2 = f(x) and
//! y^2 = g(x) are isomorphic over the algebraic closure exactly when a
//! Mobius transformation carries the branch locus of f (its roots, plus the
//! point at infinity when deg f is odd) onto the branch locus of g. A
//! genus-4 curve has 10 branch points, and a Mobius map is determined by
//! the images of three points, so the test reduces to at most
//! 10 * 9 * 8 = 720 candidate maps per pair.
//!
//! Everything here works inside a fixed preallocated tower field, normally
//! F_{p^8}, which is large enough to split every model this crate builds
//! (coefficients in F_{p^2}, branch points obtained from at most two
//! quadratic steps above F_{p^4}). Loci that fail to split are an error,
//! never a silent field extension.

use std::collections::BTreeSet;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::poly::{self, Poly};

/// A point of the projective line over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1Point {
    Finite(FieldElement),
    Infinity,
}

impl P1Point {
    /// Homogeneous coordinates (u : v), with infinity = (1 : 0).
    fn proj(&self, fd: &FieldDesc) -> (FieldElement, FieldElement) {
        match self {
            P1Point::Finite(x) => (x.clone(), fd.one()),
            P1Point::Infinity => (fd.one(), fd.zero()),
        }
    }
}

/// An invertible fractional-linear map x -> (ax + b) / (cx + d).
#[derive(Clone, Debug)]
pub struct MobiusMap {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

impl MobiusMap {
    pub fn apply(&self, fd: &FieldDesc, x: &P1Point) -> P1Point {
        let (u, v) = x.proj(fd);
        let num = fd.add(&fd.mul(&self.a, &u), &fd.mul(&self.b, &v));
        let den = fd.add(&fd.mul(&self.c, &u), &fd.mul(&self.d, &v));
        if den.is_zero() {
            debug_assert!(!num.is_zero(), "mobius map sent a point nowhere");
            P1Point::Infinity
        } else {
            P1Point::Finite(fd.div(&num, &den).expect("nonzero denominator"))
        }
    }

    /// The inverse map, via the adjugate matrix (the determinant scalar
    /// drops out projectively).
    pub fn inverse(&self, fd: &FieldDesc) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: fd.neg(&self.b),
            c: fd.neg(&self.c),
            d: self.a.clone(),
        }
    }

    /// self after `first` (matrix product self * first).
    pub fn compose(&self, fd: &FieldDesc, first: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: fd.add(&fd.mul(&self.a, &first.a), &fd.mul(&self.b, &first.c)),
            b: fd.add(&fd.mul(&self.a, &first.b), &fd.mul(&self.b, &first.d)),
            c: fd.add(&fd.mul(&self.c, &first.a), &fd.mul(&self.d, &first.c)),
            d: fd.add(&fd.mul(&self.c, &first.b), &fd.mul(&self.d, &first.d)),
        }
    }
}

/// u1 v2 - u2 v1, zero exactly when the two projective points coincide.
fn cross(fd: &FieldDesc, a: &(FieldElement, FieldElement), b: &(FieldElement, FieldElement)) -> FieldElement {
    fd.sub(&fd.mul(&a.0, &b.1), &fd.mul(&a.1, &b.0))
}

/// The matrix sending (q1, q2, q3) to (0, 1, infinity): the cross-ratio
/// map x -> (x - q1)(q2 - q3) / ((x - q3)(q2 - q1)) written projectively,
/// so points at infinity need no special casing.
fn to_standard(fd: &FieldDesc, q: &[P1Point; 3]) -> Result<MobiusMap> {
    let (q1, q2, q3) = (q[0].proj(fd), q[1].proj(fd), q[2].proj(fd));
    let s = cross(fd, &q2, &q3);
    let t = cross(fd, &q2, &q1);
    if s.is_zero() || t.is_zero() || cross(fd, &q1, &q3).is_zero() {
        return Err(Error::DegenerateTriple);
    }
    Ok(MobiusMap {
        a: fd.mul(&q1.1, &s),
        b: fd.neg(&fd.mul(&q1.0, &s)),
        c: fd.mul(&q3.1, &t),
        d: fd.neg(&fd.mul(&q3.0, &t)),
    })
}

/// The unique Mobius map sending src_i to dst_i for i = 1, 2, 3.
pub fn mobius_through(fd: &FieldDesc, src: &[P1Point; 3], dst: &[P1Point; 3]) -> Result<MobiusMap> {
    let a = to_standard(fd, src)?;
    let b = to_standard(fd, dst)?;
    // b^{-1} * a, with the inverse replaced by the adjugate (same map).
    let binv = MobiusMap {
        a: b.d.clone(),
        b: fd.neg(&b.b),
        c: fd.neg(&b.c),
        d: b.a.clone(),
    };
    Ok(binv.compose(fd, &a))
}

/// The branch locus of a genus-4 hyperelliptic model over a target field.
#[derive(Clone, Debug)]
pub struct BranchLocus {
    field: FieldDesc,
    points: Vec<P1Point>,
}

impl BranchLocus {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// The ten branch points, sorted, finite points first.
    pub fn points(&self) -> &[P1Point] {
        &self.points
    }
}

/// Branch points of y^2 = f(x) over `target`: the roots of f, plus the
/// point at infinity when deg f = 9. Requires deg f in {9, 10}, f
/// square-free, and all roots rational over `target` (the locus is an
/// error otherwise, never silently extended).
pub fn branch_locus(target: &FieldDesc, f: &Poly) -> Result<BranchLocus> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    if !matches!(deg, 9 | 10) {
        return Err(Error::InvalidDegree(deg));
    }
    let lifted = poly::lift(target, f)?;
    if !poly::is_separable(target, &lifted)? {
        return Err(Error::NotSquareFree);
    }
    // The root set is independent of the seed.
    let mut rng = ChaCha20Rng::seed_from_u64(0x6c6f_6375);
    let roots = poly::roots_in(target, &lifted, &mut rng)?;
    if roots.len() != deg {
        return Err(Error::RootsOutsideField);
    }
    let mut points: Vec<P1Point> = roots.into_iter().map(P1Point::Finite).collect();
    if deg == 9 {
        points.push(P1Point::Infinity);
    }
    Ok(BranchLocus {
        field: target.clone(),
        points,
    })
}

/// Whether y^2 = f(x) and y^2 = g(x) (both genus 4) are isomorphic over
/// the algebraic closure: some Mobius map must carry one branch locus onto
/// the other, and any such map sends some ordered triple of the first locus
/// to a fixed ordered triple of the second, so 720 candidates suffice.
pub fn hyperelliptic_iso(target: &FieldDesc, f: &Poly, g: &Poly) -> Result<bool> {
    let b1 = branch_locus(target, f)?;
    let b2 = branch_locus(target, g)?;
    locus_equivalent(target, &b1, &b2)
}

/// The Mobius-matching core of [`hyperelliptic_iso`], reusable when loci
/// are already computed (deduplication passes compare one locus against
/// many).
pub fn locus_equivalent(target: &FieldDesc, b1: &BranchLocus, b2: &BranchLocus) -> Result<bool> {
    if b1.points.len() != b2.points.len() {
        return Ok(false);
    }
    let dst: [P1Point; 3] = [
        b2.points[0].clone(),
        b2.points[1].clone(),
        b2.points[2].clone(),
    ];
    let set2: BTreeSet<&P1Point> = b2.points.iter().collect();
    let n = b1.points.len();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let src = [
                    b1.points[i].clone(),
                    b1.points[j].clone(),
                    b1.points[k].clone(),
                ];
                let m = mobius_through(target, &src, &dst)?;
                if b1
                    .points
                    .iter()
                    .all(|pt| set2.contains(&m.apply(target, pt)))
                {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
