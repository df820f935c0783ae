//! Dense univariate polynomial arithmetic over the tower fields.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies x^i)
//! and the zero polynomial is the empty vector; constructors trim trailing
//! zeros so representations stay canonical. Operations take the field
//! descriptor as explicit context, like the element ops in [`crate::fields`].
//!
//! Root finding over a chosen tower field runs the classical
//! Cantor-Zassenhaus route: reduce to the product of the distinct roots in
//! the target field via gcd(f, x^q - x), then split that product with random
//! degree-one characters. The randomness comes from a caller-supplied
//! seedable generator and the returned roots are sorted, so results are
//! reproducible (and in fact seed-independent).

use rand_chacha::rand_core::RngCore;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    /// Polynomial from ascending coefficients; lifts every coefficient into
    /// the descriptor's field and trims trailing zeros.
    pub fn new(fd: &FieldDesc, coeffs: Vec<FieldElement>) -> Result<Poly> {
        let coeffs = coeffs
            .iter()
            .map(|c| fd.lift(c))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Poly { coeffs };
        p.trim();
        Ok(p)
    }

    /// Convenience constructor from integer coefficients (negatives allowed).
    pub fn from_ints(fd: &FieldDesc, coeffs: &[i64]) -> Poly {
        let mut p = Poly {
            coeffs: coeffs.iter().map(|&v| fd.int(v)).collect(),
        };
        p.trim();
        p
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(fd: &FieldDesc) -> Poly {
        Poly {
            coeffs: vec![fd.one()],
        }
    }

    pub fn x(fd: &FieldDesc) -> Poly {
        Poly {
            coeffs: vec![fd.zero(), fd.one()],
        }
    }

    /// c * x^d.
    pub fn monomial(fd: &FieldDesc, c: &FieldElement, d: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![fd.zero(); d + 1];
        coeffs[d] = c.clone();
        Poly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, fd: &FieldDesc, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| fd.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }
}

pub fn add(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        coeffs.push(fd.add(&a.coeff(fd, i), &b.coeff(fd, i)));
    }
    let mut p = Poly { coeffs };
    p.trim();
    p
}

pub fn sub(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        coeffs.push(fd.sub(&a.coeff(fd, i), &b.coeff(fd, i)));
    }
    let mut p = Poly { coeffs };
    p.trim();
    p
}

pub fn neg(fd: &FieldDesc, a: &Poly) -> Poly {
    Poly {
        coeffs: a.coeffs.iter().map(|c| fd.neg(c)).collect(),
    }
}

pub fn mul(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut coeffs = vec![fd.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ca) in a.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.coeffs.iter().enumerate() {
            coeffs[i + j] = fd.add(&coeffs[i + j], &fd.mul(ca, cb));
        }
    }
    let mut p = Poly { coeffs };
    p.trim();
    p
}

pub fn mul_scalar(fd: &FieldDesc, a: &Poly, c: &FieldElement) -> Poly {
    if c.is_zero() {
        return Poly::zero();
    }
    Poly {
        coeffs: a.coeffs.iter().map(|x| fd.mul(x, c)).collect(),
    }
}

/// Euclidean division: a = q*b + r with deg r < deg b.
pub fn divrem(fd: &FieldDesc, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let lead_inv = fd.inv(b.leading().unwrap())?;
    let mut rem = a.coeffs.clone();
    if rem.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![fd.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = fd.mul(&rem[i], &lead_inv);
        for (j, cb) in b.coeffs.iter().enumerate() {
            let t = fd.mul(&q, cb);
            rem[i - db + j] = fd.sub(&rem[i - db + j], &t);
        }
        quot[i - db] = q;
    }
    let mut quot = Poly { coeffs: quot };
    quot.trim();
    let mut rem = Poly { coeffs: rem };
    rem.trim();
    Ok((quot, rem))
}

pub fn rem(fd: &FieldDesc, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divrem(fd, a, b)?.1)
}

fn make_monic(fd: &FieldDesc, a: &Poly) -> Poly {
    match a.leading() {
        None => Poly::zero(),
        Some(l) if l.is_one() => a.clone(),
        Some(l) => mul_scalar(fd, a, &fd.inv(l).expect("leading coefficient is nonzero")),
    }
}

/// Monic greatest common divisor by the Euclidean algorithm.
/// gcd(f, 0) is the monic multiple of f; gcd(0, 0) is an error.
pub fn gcd(fd: &FieldDesc, a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r = rem(fd, &r0, &r1)?;
        r0 = r1;
        r1 = r;
    }
    Ok(make_monic(fd, &r0))
}

pub fn eval(fd: &FieldDesc, f: &Poly, x: &FieldElement) -> FieldElement {
    let mut acc = fd.zero();
    for c in f.coeffs.iter().rev() {
        acc = fd.add(&fd.mul(&acc, x), c);
    }
    acc
}

pub fn derivative(fd: &FieldDesc, f: &Poly) -> Poly {
    if f.coeffs.len() <= 1 {
        return Poly::zero();
    }
    let mut coeffs = Vec::with_capacity(f.coeffs.len() - 1);
    for (i, c) in f.coeffs.iter().enumerate().skip(1) {
        coeffs.push(fd.mul(&fd.int(i as i64), c));
    }
    let mut p = Poly { coeffs };
    p.trim();
    p
}

/// A nonzero polynomial is separable iff it has no repeated roots in any
/// extension, i.e. gcd(f, f') is constant. In characteristic p the
/// derivative can vanish identically (f a polynomial in x^p); such f are
/// never separable and the gcd convention handles them.
pub fn is_separable(fd: &FieldDesc, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(true);
    }
    let g = gcd(fd, f, &derivative(fd, f))?;
    Ok(g.degree() == Some(0))
}

/// f^e by repeated squaring with full products (the reference path used by
/// every coefficient extraction; independent formulas are tested against it).
pub fn pow(fd: &FieldDesc, f: &Poly, e: u64) -> Poly {
    if e == 0 {
        return Poly::one(fd);
    }
    if f.is_zero() {
        return Poly::zero();
    }
    let mut acc: Option<Poly> = None;
    let mut base = f.clone();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => mul(fd, &a, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = mul(fd, &base, &base);
    }
    acc.unwrap()
}

/// Selected coefficients of f^e. `wanted` indices must not exceed
/// e * deg f; asking beyond that bound is a caller bug, not a zero.
pub fn power_coeffs(
    fd: &FieldDesc,
    f: &Poly,
    e: u64,
    wanted: &[usize],
) -> Result<Vec<FieldElement>> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let bound = d
        .checked_mul(e as usize)
        .ok_or(Error::OrderOverflow { p: fd.p(), k: fd.k() })?;
    for &w in wanted {
        if w > bound {
            return Err(Error::IndexOutOfRange {
                index: w,
                bound,
            });
        }
    }
    let fe = pow(fd, f, e);
    Ok(wanted.iter().map(|&w| fe.coeff(fd, w)).collect())
}

/// base^e mod m in the quotient ring F_{p^k}[x]/(m).
pub fn powmod(fd: &FieldDesc, base: &Poly, e: u128, m: &Poly) -> Result<Poly> {
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut acc = rem(fd, &Poly::one(fd), m)?;
    let mut b = rem(fd, base, m)?;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fd, &mul(fd, &acc, &b), m)?;
        }
        e >>= 1;
        if e > 0 {
            b = rem(fd, &mul(fd, &b, &b), m)?;
        }
    }
    Ok(acc)
}

/// Lift every coefficient into `fd` (same prime, degree dividing fd's).
pub fn lift(fd: &FieldDesc, f: &Poly) -> Result<Poly> {
    Poly::new(fd, f.coeffs.clone())
}

/// All roots of f in the field described by `target`, sorted, without
/// multiplicity. Coefficients of f must lie in a subfield of the target.
///
/// The product of the distinct target-rational roots is
/// g = gcd(f, x^q - x) with q = |target|; x^q mod f is computed by q's
/// prime-power structure (k successive p-th powers in the quotient ring,
/// each a ring endomorphism, so no q-sized exponent ever appears). The
/// square-free g is then split by Cantor-Zassenhaus with random linear
/// characters: for half the pairs of roots, a random x + a lands on
/// different sides of the quadratic-residue character, and
/// gcd(g, (x+a)^((q-1)/2) - 1) separates them.
pub fn roots_in(
    target: &FieldDesc,
    f: &Poly,
    rng: &mut impl RngCore,
) -> Result<Vec<FieldElement>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = lift(target, f)?;
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    // x^q mod f via repeated Frobenius powers.
    let mut xq = rem(target, &Poly::x(target), &f)?;
    for _ in 0..target.k() {
        xq = powmod(target, &xq, target.p() as u128, &f)?;
    }
    let linear_part = sub(target, &xq, &Poly::x(target));
    let g = if linear_part.is_zero() {
        // f divides x^q - x: every root is rational and simple.
        make_monic(target, &f)
    } else {
        gcd(target, &f, &linear_part)?
    };
    let mut roots = Vec::new();
    if g.degree().unwrap_or(0) > 0 {
        split_linear_factors(target, &g, rng, &mut roots)?;
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Split a monic square-free product of linear factors into its roots.
fn split_linear_factors(
    fd: &FieldDesc,
    h: &Poly,
    rng: &mut impl RngCore,
    out: &mut Vec<FieldElement>,
) -> Result<()> {
    match h.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            // monic x + c: root is -c.
            out.push(fd.neg(&h.coeffs[0]));
            return Ok(());
        }
        _ => {}
    }
    let q = fd.order();
    loop {
        let a = fd.random(rng);
        let t = Poly::new(fd, vec![a, fd.one()])?;
        let s = powmod(fd, &t, (q - 1) / 2, h)?;
        let g = gcd(fd, h, &sub(fd, &s, &Poly::one(fd)))?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < h.degree().unwrap() {
            let (rest, r) = divrem(fd, h, &g)?;
            debug_assert!(r.is_zero());
            split_linear_factors(fd, &g, rng, out)?;
            split_linear_factors(fd, &rest, rng, out)?;
            return Ok(());
        }
    }
}
