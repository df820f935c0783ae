//! The quintic-pair family H'_lambda: y^2 = (x^5 - 1)(x^5 - lambda).
//!
//! For lambda outside {0, 1} this is a genus-4 hyperelliptic curve whose
//! reduced automorphism group properly contains the Klein 4-group with
//! D10 generically; at lambda = -1 it jumps to C5:D4. The structure
//! mirrors the biquadratic family: with f = (x^5 - 1)(x^5 - lambda) and
//! e = (p-1)/2, the coefficient alpha_d of x^d in f^e vanishes unless
//! 5 | d, so superspeciality collapses to the vanishing of the two
//! designated coefficients alpha_{3p-i} and alpha_{4p-j}, and their monic
//! gcd G in F_p[lambda] cuts out exactly the superspecial parameters.
//!
//! Roots of G are simple, lie in F_{p^4}, avoid {0, 1}, and are closed
//! under inversion, with H'_lambda isomorphic to H'_mu exactly when mu is
//! lambda or 1/lambda; deg G is odd exactly when p = 9 (mod 10), which is
//! also exactly when lambda = -1 is a root. Counting reads the degree of
//! G without factoring; theorem contradictions surface as errors, never
//! as silently wrong numbers.
//!
//! (Conversion note: the A-form y^2 = x^10 + A x^5 + 1 relates by
//! lambda + 1/lambda = A^2 - 2.)

use crate::app::AutGroup;
use crate::cartier::HyperellipticModel;
use crate::error::{Error, Result};
use crate::family_d8::{family_count, family_gcd, family_roots};
use crate::fields::{FieldDesc, FieldElement};
use crate::hypergeom::CoeffTables;
use crate::poly::Poly;

/// A superspecial member of the family, with its automorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D10Curve {
    p: u64,
    lambda: FieldElement,
    aut: AutGroup,
}

impl D10Curve {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The family parameter, an element of F_{p^4}.
    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    pub fn aut(&self) -> AutGroup {
        self.aut
    }

    /// The model y^2 = (x^5 - 1)(x^5 - lambda) over `fd`.
    pub fn model(&self, fd: &FieldDesc) -> Result<HyperellipticModel> {
        d10_model(fd, &self.lambda)
    }
}

/// y^2 = (x^5 - 1)(x^5 - lambda) = x^10 - (1 + lambda) x^5 + lambda.
/// Degenerate parameters (lambda in {0, 1}) fail square-freeness.
pub fn d10_model(fd: &FieldDesc, lambda: &FieldElement) -> Result<HyperellipticModel> {
    let la = fd.lift(lambda)?;
    let mut cs = vec![fd.zero(); 11];
    cs[10] = fd.one();
    cs[5] = fd.neg(&fd.add(&fd.one(), &la));
    cs[0] = la;
    HyperellipticModel::new(fd, Poly::new(fd, cs)?)
}

/// The designated coefficient indices (i, j): superspeciality of
/// H'_lambda is equivalent to alpha_{3p-i} = alpha_{4p-j} = 0, with
///
/// ```text
///     (i, j) = (3,4), (4,2), (1,3), (2,1)  for  p = 1, 3, 7, 9 (mod 10).
/// ```
pub fn d10_index_pair(p: u64) -> (u64, u64) {
    assert!(p >= 7 && p % 2 == 1, "family requires an odd prime p >= 7");
    match p % 10 {
        1 => (3, 4),
        3 => (4, 2),
        7 => (1, 3),
        _ => (2, 1),
    }
}

/// G = gcd(alpha_{3p-i}, alpha_{4p-j}), monic, in F_p[lambda]. Its roots
/// are exactly the superspecial parameters.
pub fn d10_g_poly(p: u64) -> Result<Poly> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let tables = CoeffTables::new(p)?;
    let (i, j) = d10_index_pair(p);
    family_gcd(&tables, 5, i, j)
}

/// Number of superspecial H'_lambda with reduced automorphism group
/// exactly D10, from the degree and parity of G alone.
pub fn d10_count(p: u64) -> Result<usize> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    family_count(p, &d10_g_poly(p)?, d10_special_expected(p))
}

/// One representative per isomorphism class: lambda = -1 first with class
/// C5:D4 when present, then the lexicographically smaller member of each
/// {lambda, 1/lambda} root pair with class D10.
pub fn d10_enumerate(p: u64) -> Result<Vec<D10Curve>> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let g = d10_g_poly(p)?;
    let split = family_roots(p, &g, d10_special_expected(p), "G")?;
    let mut out = Vec::new();
    if let Some(l) = split.special {
        out.push(D10Curve {
            p,
            lambda: l,
            aut: AutGroup::G40,
        });
    }
    for l in split.reps {
        out.push(D10Curve {
            p,
            lambda: l,
            aut: AutGroup::D10,
        });
    }
    Ok(out)
}

/// Whether lambda = -1 must be a root of G (equivalently whether deg G is
/// odd, equivalently whether y^2 = x^10 + 1 is superspecial).
pub(crate) fn d10_special_expected(p: u64) -> bool {
    p % 10 == 9
}
