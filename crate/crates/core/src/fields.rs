//! The quadratic tower F_p < F_{p^2} < F_{p^4} < F_{p^8}.
//!
//! A [`FieldDesc`] describes F_{p^k} for k in {1, 2, 4, 8} as a chain of
//! quadratic extensions: level l is F_{p^(2^l)}, and level l+1 is obtained by
//! adjoining a square root t_{l+1} of a fixed non-square c_l of level l.
//! Elements are coordinate vectors over F_p with respect to the nested basis
//! {1, t_1} x {1, t_2} x {1, t_3}, stored little-endian: the first half of
//! the vector is the "low" part, the second half the coefficient of the top
//! generator.
//!
//! The step constants are chosen deterministically so that two descriptors
//! built for the same (p, k) are interchangeable: c_0 is the smallest integer
//! non-residue mod p, and c_l for l >= 1 is the first non-square of level l
//! in base-p encoding order (integers themselves are always squares in a
//! proper extension, so the scan necessarily leaves the prime field; it is
//! verified in tests).
//!
//! Ops are methods on the descriptor, symbolica-style: `fd.mul(&a, &b)`.
//! The infallible ops panic if handed an element of a different field; that
//! is a programming error, not input, and [`FieldDesc::lift`] is the checked
//! way to move an element up the tower.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::RngCore;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

type Coords = SmallVec<[u64; 4]>;

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse mod p by the extended Euclidean algorithm. `a` must be nonzero
/// mod the (prime) modulus.
fn invm(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime and a nonzero");
    (s0.rem_euclid(p as i128)) as u64
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of F_{p^k}; `k` is the length of the coordinate vector.
///
/// Equality, hashing and ordering are coordinate-wise, so they are only
/// meaningful between elements of the same field; the canonical
/// representative of a set of elements is the `Ord`-smallest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    p: u64,
    coords: Coords,
}

impl FieldElement {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }
}

/// Serialized form `p^k:[a0,a1,...]`, e.g. `19^2:[4,1]` for 4 + t in F_361.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:[", self.p, self.k())?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for FieldElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ConsistencyViolation(format!("malformed field element `{s}`"));
        let (head, list) = s.split_once(":[").ok_or_else(bad)?;
        let list = list.strip_suffix(']').ok_or_else(bad)?;
        let (p, k) = head.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let coords: Vec<u64> = list
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if coords.len() != k {
            return Err(bad());
        }
        let fd = FieldDesc::new(p, k)?;
        fd.element(&coords)
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Immutable descriptor of F_{p^k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDesc {
    p: u64,
    k: usize,
    /// steps[l] is the level-l non-square c_l with t_{l+1}^2 = c_l;
    /// its coordinate vector has length 2^l.
    steps: Vec<Vec<u64>>,
}

impl FieldDesc {
    /// Build the descriptor of F_{p^k}. Requires an odd prime p < 2^62,
    /// k in {1, 2, 4, 8}, and p^k within u128 range.
    pub fn new(p: u64, k: usize) -> Result<FieldDesc> {
        if !matches!(k, 1 | 2 | 4 | 8) {
            return Err(Error::InvalidDegree(k));
        }
        if p < 3 || p >= (1 << 62) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        (p as u128)
            .checked_pow(k as u32)
            .ok_or(Error::OrderOverflow { p, k })?;
        let mut fd = FieldDesc {
            p,
            k,
            steps: Vec::new(),
        };
        let levels = k.trailing_zeros() as usize;
        for lvl in 0..levels {
            let width = 1usize << lvl;
            // Elements of the index-2 subfield are always squares in the
            // quadratic extension, and encodings below p^(width/2) land in
            // that subfield, so the scan may start past them. This skips
            // only provable squares, hence finds the same constant as a
            // scan from 2 would.
            let mut n: u128 = if lvl == 0 {
                2
            } else {
                (p as u128).pow(width as u32 / 2)
            };
            let c = loop {
                let cand = fd.encode(n, width);
                if !fd.is_square_slice(lvl, &cand) {
                    break cand;
                }
                n += 1;
            };
            fd.steps.push(c.to_vec());
        }
        Ok(fd)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// p^k as a u128 (guaranteed to fit by construction).
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// Number of quadratic steps in the tower (log2 of k).
    fn levels(&self) -> usize {
        self.k.trailing_zeros() as usize
    }

    fn check(&self, x: &FieldElement) {
        assert!(
            x.p == self.p && x.coords.len() == self.k,
            "field mismatch: element of F_{{{}^{}}} used in F_{{{}^{}}}; lift explicitly",
            x.p,
            x.coords.len(),
            self.p,
            self.k
        );
    }

    fn wrap(&self, coords: Coords) -> FieldElement {
        debug_assert_eq!(coords.len(), self.k);
        FieldElement {
            p: self.p,
            coords,
        }
    }

    /// Base-p little-endian encoding of n, padded to `width` coordinates.
    fn encode(&self, mut n: u128, width: usize) -> Coords {
        let mut out: Coords = smallvec![0; width];
        for slot in out.iter_mut() {
            *slot = (n % self.p as u128) as u64;
            n /= self.p as u128;
        }
        debug_assert_eq!(n, 0, "encoding exceeds field size");
        out
    }

    /// The element whose base-p encoding is `n`; enumerating
    /// n = 0..order() walks the whole field exactly once.
    pub fn element_from_index(&self, n: u128) -> FieldElement {
        assert!(n < self.order());
        self.wrap(self.encode(n, self.k))
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(smallvec![0; self.k])
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    /// The top tower generator t (requires k > 1).
    pub fn gen(&self) -> FieldElement {
        assert!(self.k > 1, "F_p has no tower generator");
        let mut coords: Coords = smallvec![0; self.k];
        coords[self.k / 2] = 1;
        self.wrap(coords)
    }

    /// The image of the integer v under Z -> F_p -> F_{p^k}.
    pub fn int(&self, v: i64) -> FieldElement {
        let mut coords: Coords = smallvec![0; self.k];
        coords[0] = v.rem_euclid(self.p as i64) as u64;
        self.wrap(coords)
    }

    /// Element from explicit coordinates (length at most k, zero-padded,
    /// values reduced mod p).
    pub fn element(&self, coords: &[u64]) -> Result<FieldElement> {
        if coords.len() > self.k {
            return Err(Error::InvalidDegree(coords.len()));
        }
        let mut out: Coords = smallvec![0; self.k];
        for (slot, &c) in out.iter_mut().zip(coords) {
            *slot = c % self.p;
        }
        Ok(self.wrap(out))
    }

    /// Canonical embedding of an element of a subfield of the tower
    /// (same p, degree dividing k). Elements of F_{p^m} are exactly the
    /// vectors supported on the first m coordinates, so lifting is
    /// zero-extension.
    pub fn lift(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.p != self.p || self.k % x.k() != 0 {
            return Err(Error::FieldMismatch {
                expected_p: self.p,
                expected_k: self.k,
                found_p: x.p,
                found_k: x.k(),
            });
        }
        let mut coords: Coords = smallvec![0; self.k];
        coords[..x.k()].copy_from_slice(&x.coords);
        Ok(self.wrap(coords))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| addm(x, y, self.p))
            .collect();
        self.wrap(coords)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| subm(x, y, self.p))
            .collect();
        self.wrap(coords)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.check(a);
        let coords = a.coords.iter().map(|&x| subm(0, x, self.p)).collect();
        self.wrap(coords)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.mul_slice(self.levels(), &a.coords, &b.coords))
    }

    pub fn sqr(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a);
        Ok(self.wrap(self.inv_slice(self.levels(), &a.coords)?))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let binv = self.inv(b)?;
        Ok(self.mul(a, &binv))
    }

    pub fn pow(&self, a: &FieldElement, e: u128) -> FieldElement {
        self.check(a);
        self.wrap(self.pow_slice(self.levels(), &a.coords, e))
    }

    /// x -> x^(p^i), the i-th power of the absolute Frobenius.
    pub fn frobenius(&self, a: &FieldElement, i: usize) -> FieldElement {
        self.check(a);
        let mut out = a.clone();
        for _ in 0..(i % self.k) {
            out = self.pow(&out, self.p as u128);
        }
        out
    }

    /// True iff x lies in the subfield F_{p^m} (m must divide k). The
    /// subfield of order p^m is unique and equals the span of the first m
    /// basis vectors, so this is a coordinate-support test; agreement with
    /// the Frobenius fixed-point definition x^(p^m) = x is covered by tests.
    pub fn in_subfield(&self, a: &FieldElement, m: usize) -> bool {
        self.check(a);
        assert!(
            matches!(m, 1 | 2 | 4 | 8) && self.k % m == 0,
            "subfield degree {m} does not divide {}",
            self.k
        );
        a.coords[m..].iter().all(|&c| c == 0)
    }

    /// Euler criterion; zero counts as a square.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        self.check(a);
        self.is_square_slice(self.levels(), &a.coords)
    }

    /// Deterministic square root: `None` for non-squares, otherwise the
    /// coordinate-lexicographically smaller of the two roots.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        self.check(a);
        if a.is_zero() {
            return Some(a.clone());
        }
        if !self.is_square(a) {
            return None;
        }
        let q = self.order();
        let lv = self.levels();
        let s = (q - 1).trailing_zeros();
        let m = (q - 1) >> s;
        let r = if s == 1 {
            self.pow_slice(lv, &a.coords, (q + 1) / 4)
        } else {
            // Tonelli-Shanks. The scan for a non-square walks the same
            // deterministic encoding order as the tower constants, starting
            // past the index-2 subfield whose elements are all squares here.
            let mut n: u128 = if self.k == 1 {
                2
            } else {
                (self.p as u128).pow(self.k as u32 / 2)
            };
            let z = loop {
                let cand = self.encode(n, self.k);
                if !self.is_square_slice(lv, &cand) {
                    break cand;
                }
                n += 1;
            };
            let mut c = self.pow_slice(lv, &z, m);
            let mut r = self.pow_slice(lv, &a.coords, (m + 1) / 2);
            let mut t = self.pow_slice(lv, &a.coords, m);
            let mut s = s;
            let one = self.one();
            while t != one.coords {
                let mut i = 0u32;
                let mut probe = t.clone();
                while probe != one.coords {
                    probe = self.mul_slice(lv, &probe, &probe);
                    i += 1;
                }
                debug_assert!(i < s);
                let mut b = c.clone();
                for _ in 0..(s - i - 1) {
                    b = self.mul_slice(lv, &b, &b);
                }
                r = self.mul_slice(lv, &r, &b);
                let b2 = self.mul_slice(lv, &b, &b);
                t = self.mul_slice(lv, &t, &b2);
                c = b2;
                s = i;
            }
            r
        };
        let r = self.wrap(r);
        let rneg = self.neg(&r);
        debug_assert_eq!(self.mul(&r, &r), *a);
        Some(if r.coords <= rneg.coords { r } else { rneg })
    }

    /// Uniformly random element (rejection sampling, so the distribution is
    /// exact for any p).
    pub fn random(&self, rng: &mut impl RngCore) -> FieldElement {
        let coords = (0..self.k)
            .map(|_| loop {
                // 62-bit draws; p < 2^62 so this terminates quickly.
                let v = rng.next_u64() >> 2;
                let lim = (1u64 << 62) - ((1u64 << 62) % self.p);
                if v < lim {
                    return v % self.p;
                }
            })
            .collect();
        self.wrap(coords)
    }

    fn is_square_slice(&self, lvl: usize, a: &[u64]) -> bool {
        if a.iter().all(|&c| c == 0) {
            return true;
        }
        let q = (self.p as u128).pow(1 << lvl);
        let e = self.pow_slice(lvl, a, (q - 1) / 2);
        e[0] == 1 && e[1..].iter().all(|&c| c == 0)
    }

    fn add_slice(&self, a: &[u64], b: &[u64]) -> Coords {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| addm(x, y, self.p))
            .collect()
    }

    fn sub_slice(&self, a: &[u64], b: &[u64]) -> Coords {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| subm(x, y, self.p))
            .collect()
    }

    fn mul_slice(&self, lvl: usize, a: &[u64], b: &[u64]) -> Coords {
        let p = self.p;
        match lvl {
            0 => smallvec![mulm(a[0], b[0], p)],
            1 => {
                // (a0 + a1 t)(b0 + b1 t) = (a0 b0 + c a1 b1) + (a0 b1 + a1 b0) t
                let c = self.steps[0][0];
                smallvec![
                    addm(mulm(a[0], b[0], p), mulm(c, mulm(a[1], b[1], p), p), p),
                    addm(mulm(a[0], b[1], p), mulm(a[1], b[0], p), p),
                ]
            }
            _ => {
                // Karatsuba over the level below: three half-size products
                // plus one by the step constant.
                let h = 1usize << (lvl - 1);
                let (alo, ahi) = a.split_at(h);
                let (blo, bhi) = b.split_at(h);
                let lo = self.mul_slice(lvl - 1, alo, blo);
                let hi = self.mul_slice(lvl - 1, ahi, bhi);
                let mid = self.mul_slice(
                    lvl - 1,
                    &self.add_slice(alo, ahi),
                    &self.add_slice(blo, bhi),
                );
                let mid = self.sub_slice(&self.sub_slice(&mid, &lo), &hi);
                let hic = self.mul_slice(lvl - 1, &hi, &self.steps[lvl - 1]);
                let mut out = self.add_slice(&lo, &hic);
                out.extend_from_slice(&mid);
                out
            }
        }
    }

    fn inv_slice(&self, lvl: usize, a: &[u64]) -> Result<Coords> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::DivisionByZero);
        }
        if lvl == 0 {
            return Ok(smallvec![invm(a[0], self.p)]);
        }
        // 1/(lo + hi t) = (lo - hi t) / (lo^2 - c hi^2); the norm sits one
        // level down and is nonzero because conjugation is an automorphism.
        let h = 1usize << (lvl - 1);
        let (lo, hi) = a.split_at(h);
        let lo2 = self.mul_slice(lvl - 1, lo, lo);
        let hi2 = self.mul_slice(lvl - 1, hi, hi);
        let chi2 = self.mul_slice(lvl - 1, &hi2, &self.steps[lvl - 1]);
        let norm = self.sub_slice(&lo2, &chi2);
        let ninv = self.inv_slice(lvl - 1, &norm)?;
        let mut out = self.mul_slice(lvl - 1, lo, &ninv);
        let neg_hi: Coords = hi.iter().map(|&c| subm(0, c, self.p)).collect();
        out.extend_from_slice(&self.mul_slice(lvl - 1, &neg_hi, &ninv));
        Ok(out)
    }

    fn pow_slice(&self, lvl: usize, a: &[u64], mut e: u128) -> Coords {
        let width = 1usize << lvl;
        let mut acc: Coords = smallvec![0; width];
        acc[0] = 1;
        let mut base: Coords = SmallVec::from_slice(a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slice(lvl, &acc, &base);
            }
            base = self.mul_slice(lvl, &base, &base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, k: usize) -> FieldDesc {
        FieldDesc::new(p, k).unwrap()
    }

    #[test]
    fn construction_validates_inputs() {
        assert_eq!(FieldDesc::new(19, 3).unwrap_err(), Error::InvalidDegree(3));
        assert_eq!(FieldDesc::new(9, 2).unwrap_err(), Error::InvalidModulus(9));
        assert_eq!(FieldDesc::new(2, 2).unwrap_err(), Error::InvalidModulus(2));
        assert_eq!(
            FieldDesc::new(70001, 8).unwrap_err(),
            Error::OrderOverflow { p: 70001, k: 8 }
        );
        // 65521^8 is just below 2^128.
        assert!(FieldDesc::new(65521, 8).is_ok());
    }

    #[test]
    fn prime_field_basics() {
        let fp = f(19, 1);
        assert_eq!(fp.int(-1), fp.int(18));
        assert_eq!(fp.inv(&fp.int(2)).unwrap(), fp.int(10));
        assert_eq!(fp.mul(&fp.int(7), &fp.int(11)), fp.int(77 % 19));
        assert_eq!(fp.pow(&fp.int(2), 18), fp.one());
        assert_eq!(fp.inv(&fp.zero()).unwrap_err(), Error::DivisionByZero);
        assert_eq!(
            fp.div(&fp.int(3), &fp.int(7)).unwrap(),
            fp.mul(&fp.int(3), &fp.inv(&fp.int(7)).unwrap())
        );
    }

    /// Exhaustive square-root oracle over F_19: tabulate all squares by brute
    /// force, then demand sqrt agrees everywhere, returning the smaller root.
    #[test]
    fn sqrt_matches_exhaustive_table_f19() {
        let fp = f(19, 1);
        let mut smallest_root = vec![None::<u64>; 19];
        for a in 0..19u64 {
            let sq = (a * a) % 19;
            let cur = &mut smallest_root[sq as usize];
            if cur.map_or(true, |r| a < r) {
                *cur = Some(a);
            }
        }
        for x in 0..19u64 {
            let got = fp.sqrt(&fp.int(x as i64));
            match smallest_root[x as usize] {
                Some(r) => assert_eq!(got.unwrap(), fp.int(r as i64), "sqrt({x}) mod 19"),
                None => assert!(got.is_none(), "{x} is not a square mod 19"),
            }
        }
        // Spot value: 9^2 = 81 = 5 mod 19 and 9 < 10 = -9.
        assert_eq!(fp.sqrt(&fp.int(5)).unwrap(), fp.int(9));
    }

    #[test]
    fn tower_constants_are_deterministic_minimal_nonsquares() {
        let fd = f(19, 8);
        // Step 0: 2 is the smallest non-residue mod 19 (squares mod 19 are
        // {1,4,5,6,7,9,11,16,17}).
        assert_eq!(fd.steps[0], vec![2]);
        // Each step constant must be a non-square at its level, preceded in
        // encoding order only by squares.
        for lvl in 0..3 {
            let width = 1 << lvl;
            let c = &fd.steps[lvl];
            assert!(!fd.is_square_slice(lvl, c));
            // Base-p value of the constant's little-endian coordinates.
            let mut expect = 0u128;
            for &d in c.iter().rev() {
                expect = expect * 19 + d as u128;
            }
            for n in 2..expect {
                let cand = fd.encode(n, width);
                assert!(
                    fd.is_square_slice(lvl, &cand),
                    "encoding {n} at level {lvl} should be a square"
                );
            }
        }
        // Rebuilding yields identical constants.
        assert_eq!(fd, f(19, 8));
    }

    #[test]
    fn subfield_embedding_is_coordinate_extension() {
        let f2 = f(19, 2);
        let f8 = f(19, 8);
        let x = f2.element(&[4, 1]).unwrap();
        let y = f8.lift(&x).unwrap();
        assert_eq!(y.coords(), &[4, 1, 0, 0, 0, 0, 0, 0]);
        assert!(f8.in_subfield(&y, 2));
        assert!(!f8.in_subfield(&f8.gen(), 4));
        // Lift respects arithmetic.
        let a = f2.element(&[3, 7]).unwrap();
        assert_eq!(
            f8.mul(&f8.lift(&x).unwrap(), &f8.lift(&a).unwrap()),
            f8.lift(&f2.mul(&x, &a)).unwrap()
        );
        // Mismatched prime is an error.
        let g2 = f(23, 2);
        assert!(matches!(
            g2.lift(&x).unwrap_err(),
            Error::FieldMismatch { .. }
        ));
    }

    #[test]
    fn in_subfield_agrees_with_frobenius_fixed_points() {
        let fd = f(13, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = fd.random(&mut rng);
            for m in [1usize, 2, 4, 8] {
                let fixed = fd.frobenius(&x, m) == x;
                assert_eq!(fd.in_subfield(&x, m), fixed, "x = {x}, m = {m}");
            }
        }
        // And elements constructed inside a subfield are recognized.
        let f4 = f(13, 4);
        let x = f4.random(&mut rng);
        let lifted = fd.lift(&x).unwrap();
        assert!(fd.in_subfield(&lifted, 4));
    }

    #[test]
    fn frobenius_is_a_field_automorphism_of_order_k() {
        let fd = f(11, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let x = fd.random(&mut rng);
            let y = fd.random(&mut rng);
            let fx = fd.frobenius(&x, 1);
            let fy = fd.frobenius(&y, 1);
            assert_eq!(fd.frobenius(&fd.add(&x, &y), 1), fd.add(&fx, &fy));
            assert_eq!(fd.frobenius(&fd.mul(&x, &y), 1), fd.mul(&fx, &fy));
            assert_eq!(fd.frobenius(&x, 4), x);
            assert_eq!(fd.frobenius(&fd.frobenius(&x, 1), 3), x);
        }
    }

    #[test]
    fn sqrt_in_extensions() {
        // p^2 = 1 mod 8, so the 2-part of the unit group is nontrivial and
        // the general Tonelli-Shanks path runs.
        for (p, k) in [(19u64, 2usize), (31, 4), (13, 8)] {
            let fd = f(p, k);
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            for _ in 0..25 {
                let x = fd.random(&mut rng);
                let sq = fd.mul(&x, &x);
                let r = fd.sqrt(&sq).expect("a square must have a root");
                assert!(r == x || r == fd.neg(&x));
                assert_eq!(fd.mul(&r, &r), sq);
                // Canonical choice: the lex-smaller of the two roots.
                assert!(r.coords() <= fd.neg(&r).coords());
            }
            // -1 is a square in every even-degree extension.
            assert!(fd.sqrt(&fd.int(-1)).is_some());
        }
        // ... but not mod 19 itself (19 = 3 mod 4).
        assert!(f(19, 1).sqrt(&f(19, 1).int(-1)).is_none());
    }

    #[test]
    fn element_serialization_round_trips() {
        let fd = f(19, 4);
        let x = fd.element(&[1, 0, 7, 18]).unwrap();
        let s = x.to_string();
        assert_eq!(s, "19^4:[1,0,7,18]");
        let back: FieldElement = s.parse().unwrap();
        assert_eq!(back, x);
        assert!("19^4:[1,0,7]".parse::<FieldElement>().is_err());
        assert!("19^3:[1,0,7]".parse::<FieldElement>().is_err());
    }

    #[test]
    fn element_from_index_enumerates_without_repeats() {
        let fd = f(5, 2);
        let all: Vec<_> = (0..25u128).map(|n| fd.element_from_index(n)).collect();
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 25);
        assert_eq!(all[0], fd.zero());
        assert_eq!(all[1], fd.one());
        assert_eq!(all[5], fd.gen());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Field axioms in F_{19^8} on random elements.
        #[test]
        fn axioms_f19_8(seed in any::<u64>()) {
            let fd = f(19, 8);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = fd.random(&mut rng);
            let b = fd.random(&mut rng);
            let c = fd.random(&mut rng);
            prop_assert_eq!(fd.add(&a, &b), fd.add(&b, &a));
            prop_assert_eq!(fd.mul(&a, &b), fd.mul(&b, &a));
            prop_assert_eq!(fd.mul(&fd.mul(&a, &b), &c), fd.mul(&a, &fd.mul(&b, &c)));
            prop_assert_eq!(
                fd.mul(&a, &fd.add(&b, &c)),
                fd.add(&fd.mul(&a, &b), &fd.mul(&a, &c))
            );
            prop_assert_eq!(fd.sub(&a, &a), fd.zero());
            if !a.is_zero() {
                prop_assert_eq!(fd.mul(&a, &fd.inv(&a).unwrap()), fd.one());
            }
            // Lagrange: x^(q-1) = 1 for x != 0.
            if !a.is_zero() {
                prop_assert_eq!(fd.pow(&a, fd.order() - 1), fd.one());
            }
        }

        /// Squares are exactly the elements passing the Euler criterion.
        #[test]
        fn euler_criterion_f41_4(seed in any::<u64>()) {
            let fd = f(41, 4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = fd.random(&mut rng);
            let sq = fd.mul(&x, &x);
            prop_assert!(fd.is_square(&sq));
            prop_assert_eq!(fd.sqrt(&sq).is_some(), true);
        }
    }
}
