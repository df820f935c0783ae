//! Truncated hypergeometric series and the coefficient polynomials of
//! f(x)^((p-1)/2) for the one-parameter curve families.
//!
//! Throughout, p is an odd prime and e = (p-1)/2. The central object is
//!
//! ```text
//! ((x - 1)(x - L))^e  =  sum_k  gamma_k(L) x^k,
//! ```
//!
//! a polynomial whose coefficients gamma_k are themselves polynomials in the
//! family parameter L of degree at most e:
//!
//! ```text
//! gamma_k(L) = (-1)^k  sum_n  C(e, n) C(e, k - n) L^(e - k + n),
//! ```
//!
//! the sum running over max(0, k-e) <= n <= min(k, e). Substituting
//! x -> x^r and multiplying by x^e turns these into the x^d-coefficients of
//! the degree-9 family x(x^4 - 1)(x^4 - L) and the degree-10 family
//! (x^5 - 1)(x^5 - L); see [`CoeffTables::alpha_beta_poly`].
//!
//! The same gamma_k admit closed forms as truncated Gauss series
//! G^(d)(a, b, c; z) = sum_{n<=d} g_n z^n with
//! g_n = g_{n-1} (a+n-1)(b+n-1) / ((c+n-1) n); [`hyper_truncation`] computes
//! those and the tests pin the two routes against each other and against
//! direct expansion of f^e.

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::poly::{self, Poly};

/// Factorial tables mod p, with enough context to emit coefficient
/// polynomials for a fixed prime.
pub struct CoeffTables {
    fp: FieldDesc,
    e: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl CoeffTables {
    pub fn new(p: u64) -> Result<CoeffTables> {
        let fp = FieldDesc::new(p, 1)?;
        // fact[i] = i! mod p for i < p; inverse factorials by one inversion
        // and a backward sweep.
        let n = p as usize;
        let mut fact = Vec::with_capacity(n);
        fact.push(1u64);
        for i in 1..n as u64 {
            let prev = *fact.last().unwrap();
            fact.push(((prev as u128 * i as u128) % p as u128) as u64);
        }
        let mut inv_fact = vec![0u64; n];
        let last = fp.inv(&fp.int(fact[n - 1] as i64))?;
        inv_fact[n - 1] = last.coords()[0];
        for i in (1..n).rev() {
            inv_fact[i - 1] = ((inv_fact[i] as u128 * i as u128) % p as u128) as u64;
        }
        Ok(CoeffTables {
            fp,
            e: (p - 1) / 2,
            fact,
            inv_fact,
        })
    }

    pub fn p(&self) -> u64 {
        self.fp.p()
    }

    /// e = (p - 1)/2, the exponent every family power uses.
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn field(&self) -> &FieldDesc {
        &self.fp
    }

    /// Binomial coefficient mod p for arguments below p (no Lucas step
    /// needed: every caller stays under p).
    pub fn binom(&self, n: u64, m: u64) -> u64 {
        if m > n {
            return 0;
        }
        assert!(n < self.p(), "binomial argument must be reduced below p");
        let p = self.p() as u128;
        let t = (self.fact[n as usize] as u128 * self.inv_fact[m as usize] as u128) % p;
        ((t * self.inv_fact[(n - m) as usize] as u128) % p) as u64
    }

    /// gamma_k as a polynomial in the parameter, for 0 <= k <= p-1.
    pub fn gamma_coeff(&self, k: u64) -> Result<Poly> {
        let e = self.e;
        if k > 2 * e {
            return Err(Error::IndexOutOfRange {
                index: k as usize,
                bound: (2 * e) as usize,
            });
        }
        let lo = k.saturating_sub(e);
        let hi = k.min(e);
        // Exponent of the parameter runs over e-k+n for n in [lo, hi].
        let deg = (e + hi - k) as usize;
        let mut coeffs = vec![self.fp.zero(); deg + 1];
        for n in lo..=hi {
            let c = self
                .fp
                .int((self.binom(e, n) as u128 * self.binom(e, k - n) as u128 % self.p() as u128)
                    as i64);
            coeffs[(e + n - k) as usize] = c;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let body = Poly::new(&self.fp, coeffs)?;
        Ok(poly::mul_scalar(&self.fp, &body, &self.fp.int(sign)))
    }

    /// The x^d-coefficient of f^e as a polynomial in the family parameter,
    /// where f is the degree-9 model x(x^4 - 1)(x^4 - L) for r = 4 and the
    /// degree-10 model (x^5 - 1)(x^5 - L) for r = 5.
    ///
    /// Substituting u = x^r shows the coefficient vanishes off the support
    /// lattice (d = e mod 4 for r = 4, d = 0 mod 5 for r = 5) and equals a
    /// gamma on it.
    pub fn alpha_beta_poly(&self, r: u64, d: u64) -> Result<Poly> {
        let e = self.e;
        match r {
            4 => {
                let bound = 9 * e;
                if d > bound {
                    return Err(Error::IndexOutOfRange {
                        index: d as usize,
                        bound: bound as usize,
                    });
                }
                if d < e || (d - e) % 4 != 0 {
                    return Ok(Poly::zero());
                }
                self.gamma_coeff((d - e) / 4)
            }
            5 => {
                let bound = 10 * e;
                if d > bound {
                    return Err(Error::IndexOutOfRange {
                        index: d as usize,
                        bound: bound as usize,
                    });
                }
                if d % 5 != 0 {
                    return Ok(Poly::zero());
                }
                self.gamma_coeff(d / 5)
            }
            other => Err(Error::InvalidDegree(other as usize)),
        }
    }
}

/// Truncation at degree d of the Gauss series G(a, b, c; z), computed by the
/// term recurrence g_n = g_{n-1} (a+n-1)(b+n-1) / ((c+n-1) n).
///
/// Requires d < p so the factor n never vanishes; if c+n-1 vanishes at some
/// term n <= d the series is undefined there and the error reports that n,
/// even if the numerator happens to vanish earlier.
pub fn hyper_truncation(
    fd: &FieldDesc,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    d: usize,
) -> Result<Poly> {
    if d >= fd.p() as usize {
        return Err(Error::IndexOutOfRange {
            index: d,
            bound: fd.p() as usize - 1,
        });
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut g = fd.one();
    coeffs.push(g.clone());
    for n in 1..=d as i64 {
        let an = fd.add(a, &fd.int(n - 1));
        let bn = fd.add(b, &fd.int(n - 1));
        let cn = fd.add(c, &fd.int(n - 1));
        if cn.is_zero() {
            return Err(Error::DenominatorVanishes(n as usize));
        }
        let num = fd.mul(&an, &bn);
        let den = fd.mul(&cn, &fd.int(n));
        g = fd.mul(&g, &fd.div(&num, &den)?);
        coeffs.push(g.clone());
    }
    Poly::new(fd, coeffs)
}
