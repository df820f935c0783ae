//! The biquadratic family H_lambda: y^2 = x (x^4 - 1) (x^4 - lambda).
//!
//! For lambda outside {0, 1} this is a genus-4 hyperelliptic curve whose
//! reduced automorphism group contains D4, and properly contains it with
//! D8 generically; at lambda = -1 the group jumps to C16:C2. Writing
//! f = x (x^4 - 1)(x^4 - lambda) and e = (p-1)/2, the coefficient
//! beta_d of x^d in f^e vanishes unless d = e (mod 4), so the 4x4
//! Cartier-Manin matrix of H_lambda has at most four nonzero entries and
//! superspeciality collapses to the vanishing of just two designated
//! coefficients beta_{3p-i} and beta_{4p-j}, polynomials in lambda over
//! F_p. Their monic gcd F detects the superspecial members: H_lambda is
//! superspecial exactly when F(lambda) = 0.
//!
//! All roots of F are simple, lie in F_{p^4}, avoid {0, 1}, and are closed
//! under lambda -> 1/lambda, with H_lambda isomorphic to H_mu exactly when
//! mu is lambda or 1/lambda; the degree of F is odd exactly when p = -1, 9
//! (mod 16), which is also exactly when lambda = -1 is a root. Counting
//! therefore never factors F: the number of curves with reduced group D8
//! is (deg F - 1)/2 or (deg F)/2 by that parity. These facts are enforced
//! at runtime: contradictions surface as [`Error::ParityViolation`],
//! [`Error::RationalityViolation`] or [`Error::ConsistencyViolation`]
//! rather than silently wrong counts.
//!
//! (Conversion note: the same curves are often presented as
//! y^2 = x^9 + A x^5 + x; the parameters are linked by
//! lambda + 1/lambda = A^2 - 2.)

use std::collections::BTreeSet;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::app::AutGroup;
use crate::cartier::HyperellipticModel;
use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::hypergeom::CoeffTables;
use crate::poly::{self, Poly};

/// A superspecial member of the family, with its automorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D8Curve {
    p: u64,
    lambda: FieldElement,
    aut: AutGroup,
}

impl D8Curve {
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

    /// The model y^2 = x (x^4 - 1)(x^4 - lambda) over `fd`.
    pub fn model(&self, fd: &FieldDesc) -> Result<HyperellipticModel> {
        d8_model(fd, &self.lambda)
    }
}

/// y^2 = x (x^4 - 1)(x^4 - lambda) = x^9 - (1 + lambda) x^5 + lambda x.
/// Degenerate parameters (lambda in {0, 1}) fail square-freeness.
pub fn d8_model(fd: &FieldDesc, lambda: &FieldElement) -> Result<HyperellipticModel> {
    let la = fd.lift(lambda)?;
    let mut cs = vec![fd.zero(); 10];
    cs[9] = fd.one();
    cs[5] = fd.neg(&fd.add(&fd.one(), &la));
    cs[1] = la;
    HyperellipticModel::new(fd, Poly::new(fd, cs)?)
}

/// The designated coefficient indices (i, j): superspeciality of H_lambda
/// is equivalent to beta_{3p-i} = beta_{4p-j} = 0, with
///
/// ```text
///     (i, j) = (3,4), (4,3), (1,2), (2,1)  for  p = 1, 3, 5, 7 (mod 8).
/// ```
pub fn d8_index_pair(p: u64) -> (u64, u64) {
    assert!(p >= 7 && p % 2 == 1, "family requires an odd prime p >= 7");
    match p % 8 {
        1 => (3, 4),
        3 => (4, 3),
        5 => (1, 2),
        _ => (2, 1),
    }
}

/// F = gcd(beta_{3p-i}, beta_{4p-j}), monic, in F_p[lambda]. Its roots are
/// exactly the superspecial parameters.
pub fn d8_f_poly(p: u64) -> Result<Poly> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let tables = CoeffTables::new(p)?;
    let (i, j) = d8_index_pair(p);
    family_gcd(&tables, 4, i, j)
}

/// Number of superspecial H_lambda with reduced automorphism group exactly
/// D8, from the degree and parity of F alone (no factoring).
pub fn d8_count(p: u64) -> Result<usize> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    family_count(p, &d8_f_poly(p)?, d8_special_expected(p))
}

/// One representative per isomorphism class: lambda = -1 first with class
/// C16:C2 when present, then the lexicographically smaller member of each
/// {lambda, 1/lambda} root pair with class D8.
pub fn d8_enumerate(p: u64) -> Result<Vec<D8Curve>> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let f = d8_f_poly(p)?;
    let split = family_roots(p, &f, d8_special_expected(p), "F")?;
    let mut out = Vec::new();
    if let Some(l) = split.special {
        out.push(D8Curve {
            p,
            lambda: l,
            aut: AutGroup::G32,
        });
    }
    for l in split.reps {
        out.push(D8Curve {
            p,
            lambda: l,
            aut: AutGroup::D8,
        });
    }
    Ok(out)
}

/// Whether lambda = -1 must be a root of F (equivalently whether deg F is
/// odd, equivalently whether y^2 = x^9 + x is superspecial).
pub(crate) fn d8_special_expected(p: u64) -> bool {
    matches!(p % 16, 9 | 15)
}

// The helpers below are shared with the quintic-pair family, which mirrors
// this module with r = 5 and mod-10 laws.

/// Monic gcd of the two designated coefficient polynomials of family r.
pub(crate) fn family_gcd(tables: &CoeffTables, r: u64, i: u64, j: u64) -> Result<Poly> {
    let p = tables.p();
    let a = tables.alpha_beta_poly(r, 3 * p - i)?;
    let b = tables.alpha_beta_poly(r, 4 * p - j)?;
    poly::gcd(tables.field(), &a, &b)
}

/// Class count from degree and parity: the special root -1 (present
/// exactly when `odd_expected`) contributes no class here, and the rest
/// pair up under inversion.
pub(crate) fn family_count(p: u64, f: &Poly, odd_expected: bool) -> Result<usize> {
    let deg = f.degree().unwrap_or(0);
    if (deg % 2 == 1) != odd_expected {
        return Err(Error::ParityViolation { p, degree: deg });
    }
    Ok(deg / 2)
}

/// Root extraction shared by both families: all roots over F_{p^4},
/// consistency-checked, split into the special root -1 and one
/// lexicographic representative per inversion pair.
pub(crate) struct RootSplit {
    pub special: Option<FieldElement>,
    pub reps: Vec<FieldElement>,
}

pub(crate) fn family_roots(
    p: u64,
    f: &Poly,
    minus1_expected: bool,
    tag: &str,
) -> Result<RootSplit> {
    let deg = f.degree().unwrap_or(0);
    let f4 = FieldDesc::new(p, 4)?;
    // The root set is independent of this seed.
    let mut rng = ChaCha20Rng::seed_from_u64(0x6269_7175 ^ p);
    let roots = if deg == 0 {
        Vec::new()
    } else {
        poly::roots_in(&f4, f, &mut rng)?
    };
    if roots.len() != deg {
        return Err(Error::RationalityViolation {
            p,
            expected: deg,
            found: roots.len(),
        });
    }
    let minus1 = f4.int(-1);
    let has_special = roots.contains(&minus1);
    if has_special != minus1_expected {
        return Err(Error::ConsistencyViolation(format!(
            "lambda = -1 should be a root of {tag} at p = {p} exactly when \
             the congruence class says so (expected {minus1_expected}, found {has_special})"
        )));
    }
    let mut reps = BTreeSet::new();
    for la in roots {
        if la == minus1 {
            continue;
        }
        if la.is_zero() || la.is_one() {
            return Err(Error::ConsistencyViolation(format!(
                "{tag} has a degenerate root {la} at p = {p}"
            )));
        }
        let inv = f4.inv(&la)?;
        reps.insert(la.min(inv));
    }
    Ok(RootSplit {
        special: has_special.then_some(minus1),
        reps: reps.into_iter().collect(),
    })
}
