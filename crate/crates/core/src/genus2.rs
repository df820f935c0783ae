//! Superspecial genus-2 machinery in Rosenhain form.
//!
//! A genus-2 curve with rational Weierstrass points can be written as
//!
//! ```text
//!     y^2 = x (x - 1) (x - lambda) (x - mu) (x - nu)
//! ```
//!
//! with branch points {0, 1, infinity, lambda, mu, nu}. Over F_{p^2} every
//! superspecial genus-2 curve admits such a model with all three parameters
//! in F_{p^2}, so enumerating superspecial triples over F_{p^2} captures
//! every isomorphism class (with heavy redundancy; deduplication is the
//! caller's job).
//!
//! Two Rosenhain curves are isomorphic exactly when a Mobius transformation
//! maps one branch sextet onto the other. Normalizing the image of three
//! chosen branch points to (0, 1, infinity) turns this into the 120
//! cross-ratio relabelings of [`relabelings`].

use std::collections::BTreeSet;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cartier::{self, HyperellipticModel};
use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::hypergeom::CoeffTables;
use crate::poly::{self, Poly};

/// An ordered Rosenhain parameter triple (lambda, mu, nu), each coordinate
/// outside {0, 1} and mutually distinct.
///
/// Order matters for bookkeeping (relabelings report images in a fixed
/// order); use [`RosenhainTriple::sorted`] when a canonical representative
/// of the unordered triple is needed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RosenhainTriple {
    coords: [FieldElement; 3],
}

impl RosenhainTriple {
    pub fn new(
        fd: &FieldDesc,
        lambda: FieldElement,
        mu: FieldElement,
        nu: FieldElement,
    ) -> Result<RosenhainTriple> {
        let coords = [fd.lift(&lambda)?, fd.lift(&mu)?, fd.lift(&nu)?];
        let ok = coords.iter().all(|c| !c.is_zero() && !c.is_one())
            && coords[0] != coords[1]
            && coords[0] != coords[2]
            && coords[1] != coords[2];
        if !ok {
            return Err(Error::InvalidTriple);
        }
        Ok(RosenhainTriple { coords })
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.coords[0]
    }

    pub fn mu(&self) -> &FieldElement {
        &self.coords[1]
    }

    pub fn nu(&self) -> &FieldElement {
        &self.coords[2]
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    /// Characteristic of the field the coordinates live in.
    pub fn prime(&self) -> u64 {
        self.coords[0].p()
    }

    /// The same unordered triple with coordinates in ascending order
    /// (coordinate-lexicographic, the `FieldElement` ordering).
    pub fn sorted(&self) -> RosenhainTriple {
        let mut coords = self.coords.clone();
        coords.sort();
        RosenhainTriple { coords }
    }

    /// The model y^2 = x (x - 1) (x - lambda) (x - mu) (x - nu).
    pub fn model(&self, fd: &FieldDesc) -> Result<HyperellipticModel> {
        let x = Poly::x(fd);
        let mut f = poly::mul(fd, &x, &linear(fd, &fd.one()));
        for c in &self.coords {
            f = poly::mul(fd, &f, &linear(fd, c));
        }
        HyperellipticModel::new(fd, f)
    }
}

/// x - c as a polynomial.
fn linear(fd: &FieldDesc, c: &FieldElement) -> Poly {
    Poly::new(fd, vec![fd.neg(c), fd.one()]).expect("coefficients are already in fd")
}

/// Whether y^2 = x (x-1) (x-lambda) (x-mu) (x-nu) is superspecial, i.e. its
/// 2x2 Cartier-Manin matrix vanishes.
pub fn rosenhain_superspecial(fd: &FieldDesc, t: &RosenhainTriple) -> Result<bool> {
    cartier::is_superspecial(fd, &t.model(fd)?)
}

/// One cross-ratio relabeling of a Rosenhain triple.
///
/// `sources` records which three of the six branch points, indexed into the
/// canonical list [0, 1, infinity, lambda, mu, nu], were sent to
/// (0, 1, infinity). The remaining three points, taken in canonical list
/// order, map to the new (lambda', mu', nu').
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub triple: RosenhainTriple,
    pub sources: [usize; 3],
}

/// A point of the projective line; `None` is the point at infinity.
type ProjPoint = Option<FieldElement>;

/// u - v, or `None` when either point is at infinity (such factors are
/// excluded from cross-ratios, matching the limit value).
fn diff(fd: &FieldDesc, u: &ProjPoint, v: &ProjPoint) -> Option<FieldElement> {
    match (u, v) {
        (Some(a), Some(b)) => Some(fd.sub(a, b)),
        _ => None,
    }
}

/// The image of x under the Mobius map sending (a1, a2, a3) to
/// (0, 1, infinity):
///
/// ```text
///     m(x) = (x - a1)(a2 - a3) / ((x - a3)(a2 - a1))
/// ```
///
/// with infinity-factors excluded. The caller guarantees x is none of
/// a1, a2, a3, so the image is finite and nonzero.
fn cross_ratio(
    fd: &FieldDesc,
    x: &ProjPoint,
    a1: &ProjPoint,
    a2: &ProjPoint,
    a3: &ProjPoint,
) -> Result<FieldElement> {
    let mut num = fd.one();
    for f in [diff(fd, x, a1), diff(fd, a2, a3)].into_iter().flatten() {
        num = fd.mul(&num, &f);
    }
    let mut den = fd.one();
    for f in [diff(fd, x, a3), diff(fd, a2, a1)].into_iter().flatten() {
        den = fd.mul(&den, &f);
    }
    fd.div(&num, &den)
}

/// All 120 branch-point relabelings of a Rosenhain triple.
///
/// For every ordered choice (a1, a2, a3) of three distinct points from
/// {0, 1, infinity, lambda, mu, nu}, the Mobius map m with
/// m(a1, a2, a3) = (0, 1, infinity) sends the remaining three points
/// (in canonical list order) to a new valid triple describing an
/// isomorphic curve. Duplicate triples are retained, each with its
/// provenance in `sources`.
pub fn relabelings(fd: &FieldDesc, t: &RosenhainTriple) -> Result<Vec<Relabeling>> {
    let points: [ProjPoint; 6] = [
        Some(fd.zero()),
        Some(fd.one()),
        None,
        Some(fd.lift(t.lambda())?),
        Some(fd.lift(t.mu())?),
        Some(fd.lift(t.nu())?),
    ];
    let mut out = Vec::with_capacity(120);
    for i1 in 0..6 {
        for i2 in 0..6 {
            if i2 == i1 {
                continue;
            }
            for i3 in 0..6 {
                if i3 == i1 || i3 == i2 {
                    continue;
                }
                let mut images = Vec::with_capacity(3);
                for (i, pt) in points.iter().enumerate() {
                    if i != i1 && i != i2 && i != i3 {
                        images.push(cross_ratio(
                            fd,
                            pt,
                            &points[i1],
                            &points[i2],
                            &points[i3],
                        )?);
                    }
                }
                let (nu2, mu2, la2) = (
                    images.pop().expect("three leftover points"),
                    images.pop().expect("three leftover points"),
                    images.pop().expect("three leftover points"),
                );
                out.push(Relabeling {
                    triple: RosenhainTriple::new(fd, la2, mu2, nu2)?,
                    sources: [i1, i2, i3],
                });
            }
        }
    }
    Ok(out)
}

/// Whether two Rosenhain triples present isomorphic curves, i.e. whether t2
/// is (as an unordered triple) among the relabelings of t1.
pub fn rosenhain_isomorphic(
    fd: &FieldDesc,
    t1: &RosenhainTriple,
    t2: &RosenhainTriple,
) -> Result<bool> {
    if t1.prime() != t2.prime() {
        return Err(Error::PrimeMismatch {
            expected: t1.prime(),
            found: t2.prime(),
        });
    }
    let target = t2.sorted();
    for r in relabelings(fd, t1)? {
        if r.triple.sorted() == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All superspecial Rosenhain triples over F_{p^2}, as canonical sorted
/// triples. Every unordered superspecial triple appears exactly once; no
/// isomorphism-class deduplication is performed.
///
/// The scan fixes an unordered pair {lambda, mu} and solves for nu: with
/// h = x (x-1) (x-lambda) (x-mu), each Cartier-Manin entry of
/// (h (x-nu))^((p-1)/2) is a polynomial of degree <= (p-1)/2 in nu whose
/// coefficients are single coefficients of h^((p-1)/2),
///
/// ```text
///     [x^D] (h (x-nu))^e = sum_s (-1)^s C(e,s) [x^(D-e+s)] h^e  nu^s,
/// ```
///
/// so the superspecial nu are the common roots of four such polynomials.
/// The gcd is folded lazily across the four entries with an early exit
/// once it is constant, and h^e itself is assembled per pair by convolving
/// a per-lambda power (x (x-1) (x-lambda))^e with binomials of (x-mu)^e.
pub fn enumerate_rosenhain(p: u64) -> Result<BTreeSet<RosenhainTriple>> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let fd = FieldDesc::new(p, 2)?;
    let tables = CoeffTables::new(p)?;
    let e = tables.e() as usize;
    let order = usize::try_from(fd.order()).expect("field too large to enumerate");
    let mut elems = Vec::with_capacity(order - 2);
    for n in 0..order {
        let x = fd.element_from_index(n as u128);
        if !x.is_zero() && !x.is_one() {
            elems.push(x);
        }
    }
    let bin: Vec<FieldElement> = (0..=e)
        .map(|s| fd.int(tables.binom(e as u64, s as u64) as i64))
        .collect();
    // The root set is seed-independent; the seed only fixes internal choices.
    let mut rng = ChaCha20Rng::seed_from_u64(0x7233_7370 ^ p);

    let pe = p as usize;
    // h^e coefficient windows needed by the four entries at x-degrees
    // p-2, p-1, 2p-2, 2p-1 (entries i*p - j for i, j in {1, 2}).
    let lo0 = pe - 2 - e;
    let hi0 = 2 * pe - 2 - e;
    let win_len = e + 2;

    let mut out = BTreeSet::new();
    for i in 0..elems.len() {
        let la = &elems[i];
        // (x (x-1) (x-lambda))^e, shared by every pair with this lambda.
        let cubic = Poly::new(
            &fd,
            vec![
                fd.zero(),
                la.clone(),
                fd.neg(&fd.add(la, &fd.one())),
                fd.one(),
            ],
        )?;
        let base = poly::pow(&fd, &cubic, e as u64);
        let basec = base.coeffs();
        let deg_base = 3 * e;

        for mu in elems.iter().skip(i + 1) {
            // w[t] = C(e,t) (-mu)^(e-t), the coefficients of (x-mu)^e.
            let negmu = fd.neg(mu);
            let mut w = vec![fd.zero(); e + 1];
            let mut pw = fd.one();
            for t in (0..=e).rev() {
                w[t] = fd.mul(&bin[t], &pw);
                pw = fd.mul(&pw, &negmu);
            }
            let conv = |d: usize| -> FieldElement {
                let t_lo = d.saturating_sub(deg_base);
                let t_hi = e.min(d);
                let mut acc = fd.zero();
                for t in t_lo..=t_hi {
                    acc = fd.add(&acc, &fd.mul(&w[t], &basec[d - t]));
                }
                acc
            };
            let entry_poly = |vals: &[FieldElement], off: usize, d: usize| -> Result<Poly> {
                let mut cs = Vec::with_capacity(e + 1);
                for s in 0..=e {
                    let c = fd.mul(&bin[s], &vals[d - e + s - off]);
                    cs.push(if s % 2 == 1 { fd.neg(&c) } else { c });
                }
                Poly::new(&fd, cs)
            };
            let fold = |g: Poly, h: Poly| -> Result<Poly> {
                if h.is_zero() {
                    Ok(g)
                } else if g.is_zero() {
                    Ok(h)
                } else {
                    poly::gcd(&fd, &g, &h)
                }
            };

            let lo: Vec<FieldElement> = (0..win_len).map(|u| conv(lo0 + u)).collect();
            let mut g = entry_poly(&lo, lo0, pe - 2)?;
            g = fold(g, entry_poly(&lo, lo0, pe - 1)?)?;
            if g.degree() != Some(0) {
                let hi: Vec<FieldElement> = (0..win_len)
                    .map(|u| {
                        let d = hi0 + u;
                        if d > 4 * e {
                            fd.zero()
                        } else {
                            conv(d)
                        }
                    })
                    .collect();
                g = fold(g, entry_poly(&hi, hi0, 2 * pe - 2)?)?;
                if g.degree() != Some(0) {
                    g = fold(g, entry_poly(&hi, hi0, 2 * pe - 1)?)?;
                }
            }

            match g.degree() {
                Some(0) => {}
                None => {
                    // All four entry polynomials vanish identically, so every
                    // admissible nu would do. Not believed reachable; verify
                    // each candidate directly rather than trusting it.
                    for nu in &elems {
                        if nu == la || nu == mu {
                            continue;
                        }
                        let t = RosenhainTriple::new(&fd, la.clone(), mu.clone(), nu.clone())?;
                        if rosenhain_superspecial(&fd, &t)? {
                            out.insert(t.sorted());
                        }
                    }
                }
                Some(_) => {
                    for nu in poly::roots_in(&fd, &g, &mut rng)? {
                        if nu.is_zero() || nu.is_one() || nu == *la || nu == *mu {
                            continue;
                        }
                        let t = RosenhainTriple::new(&fd, la.clone(), mu.clone(), nu)?;
                        out.insert(t.sorted());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// [`enumerate_rosenhain`] with a directory cache. The cache file is keyed
/// by p; a missing or malformed file is recomputed and rewritten.
pub fn enumerate_rosenhain_cached(p: u64, dir: &Path) -> Result<BTreeSet<RosenhainTriple>> {
    let file = dir.join(format!("rosenhain-p{p}.txt"));
    if let Some(set) = read_cache(p, &file) {
        return Ok(set);
    }
    let set = enumerate_rosenhain(p)?;
    std::fs::create_dir_all(dir)?;
    let mut text = format!("ssp4 rosenhain v1 p={} count={}\n", p, set.len());
    for t in &set {
        text.push_str(&format!(
            "{} {} {}\n",
            t.coords[0], t.coords[1], t.coords[2]
        ));
    }
    std::fs::write(&file, text)?;
    Ok(set)
}

fn read_cache(p: u64, file: &Path) -> Option<BTreeSet<RosenhainTriple>> {
    let text = std::fs::read_to_string(file).ok()?;
    let mut lines = text.lines();
    let head = lines.next()?;
    let count: usize = head
        .strip_prefix(&format!("ssp4 rosenhain v1 p={p} count="))?
        .parse()
        .ok()?;
    let fd = FieldDesc::new(p, 2).ok()?;
    let mut set = BTreeSet::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let a = it.next()?.parse().ok()?;
        let b = it.next()?.parse().ok()?;
        let c = it.next()?.parse().ok()?;
        let t = RosenhainTriple::new(&fd, a, b, c).ok()?;
        set.insert(t.sorted());
    }
    (set.len() == count).then_some(set)
}
