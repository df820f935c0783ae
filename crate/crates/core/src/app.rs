//! Search strategies, congruence fast paths, full-enumeration reports, and
//! record types shared by the curve families and the CLI.

use std::time::Instant;

use rand_chacha::rand_core::RngCore;
use rand_chacha::{rand_core::SeedableRng, ChaCha20Rng};
use serde::ser::Serializer;
use serde::Serialize;

use crate::cartier::{self, HyperellipticModel};
use crate::error::{Error, Result};
use crate::family_d10::{d10_count, d10_enumerate, d10_g_poly, d10_model};
use crate::family_d4::{d4_enumerate_direct_report, d4_find_exact};
use crate::family_d8::{d8_count, d8_enumerate, d8_f_poly, d8_model};
use crate::fields::{FieldDesc, FieldElement};
use crate::hypergeom::CoeffTables;
use crate::iso4;
use crate::poly::{self, Poly};

/// The reduced automorphism-group classes that occur for superspecial
/// genus-4 hyperelliptic curves whose group properly contains the Klein
/// 4-group, plus C18 (the cyclic class of y^2 = x^10 + x, which carries no
/// Klein subgroup and therefore no table column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AutGroup {
    D4,
    D8,
    D10,
    G32,
    G40,
    C18,
}

impl AutGroup {
    /// Structure name used in serialized records.
    pub fn group_name(&self) -> &'static str {
        match self {
            AutGroup::D4 => "D4",
            AutGroup::D8 => "D8",
            AutGroup::D10 => "D10",
            AutGroup::G32 => "C16:C2",
            AutGroup::G40 => "C5:D4",
            AutGroup::C18 => "C18",
        }
    }

    /// Short family tag used in records and CLI arguments.
    pub fn tag(&self) -> &'static str {
        match self {
            AutGroup::D4 => "D4",
            AutGroup::D8 => "D8",
            AutGroup::D10 => "D10",
            AutGroup::G32 => "G32",
            AutGroup::G40 => "G40",
            AutGroup::C18 => "C18",
        }
    }

    /// Summary-table column this class is counted under; C18 has none.
    pub fn column(&self) -> Option<&'static str> {
        match self {
            AutGroup::C18 => None,
            other => Some(other.tag()),
        }
    }
}

impl std::fmt::Display for AutGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.group_name())
    }
}

impl Serialize for AutGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.group_name())
    }
}

/// Whether the three fixed curves with extra structure are superspecial in
/// characteristic p, by pure congruence tests:
///
/// * `g32`: y^2 = x^9 + x (group C16:C2) iff p = 9 or 15 (mod 16);
/// * `c18`: y^2 = x^10 + x (cyclic, no Klein subgroup) iff p = 8 (mod 9);
/// * `g40`: y^2 = x^10 + 1 (group C5:D4) iff p = 9 (mod 10).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialFlags {
    pub g32: bool,
    pub c18: bool,
    pub g40: bool,
}

pub fn special_families(p: u64) -> SpecialFlags {
    assert!(p >= 7 && p % 2 == 1, "requires an odd prime p >= 7");
    SpecialFlags {
        g32: matches!(p % 16, 9 | 15),
        c18: p % 9 == 8,
        g40: p % 10 == 9,
    }
}

/// One verified superspecial curve. Records are only built through
/// [`CurveRecord::from_model`], which re-verifies superspeciality, so
/// `superspecial` is always true on emit.
#[derive(Clone, Debug, Serialize)]
pub struct CurveRecord {
    pub p: u64,
    /// Family tag: D4, D8, D10, G32, G40, or C18.
    pub family: String,
    /// Automorphism-group structure name (e.g. "C16:C2" for G32).
    pub aut: String,
    /// Family parameter, when the family has one.
    pub lambda: Option<String>,
    /// Model coefficients of f in y^2 = f(x), lowest degree first.
    pub model: Vec<String>,
    pub superspecial: bool,
}

impl CurveRecord {
    pub fn from_model(
        fd: &FieldDesc,
        family: AutGroup,
        model: &HyperellipticModel,
        lambda: Option<&FieldElement>,
    ) -> Result<CurveRecord> {
        if !cartier::is_superspecial(fd, model)? {
            return Err(Error::ConsistencyViolation(format!(
                "refusing to emit a non-superspecial record for family {} at p = {}",
                family.tag(),
                fd.p()
            )));
        }
        Ok(CurveRecord {
            p: fd.p(),
            family: family.tag().to_string(),
            aut: family.group_name().to_string(),
            lambda: lambda.map(|l| l.to_string()),
            model: model.f().coeffs().iter().map(|c| c.to_string()).collect(),
            superspecial: true,
        })
    }
}

/// Class counts in the summary-table column order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupCounts {
    pub all: usize,
    pub d4: usize,
    pub d8: usize,
    pub d10: usize,
    pub g32: usize,
    pub g40: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

/// Output of [`enumerate_all`]: counts, one representative record per
/// class, and wall-clock timings per enumeration phase.
#[derive(Clone, Debug, Serialize)]
pub struct EnumReport {
    pub p: u64,
    pub counts: GroupCounts,
    pub representatives: Vec<CurveRecord>,
    pub timings: Vec<PhaseTiming>,
    /// Degenerate (a, b) parameters skipped by the direct D4 scan.
    pub degenerate_skipped: usize,
}

/// Enumerate every isomorphism class with automorphism group properly
/// containing the Klein 4-group, by combining the three family
/// enumerators. The D10 family contributes the classes invisible to the
/// D4 scan (8 does not divide 20); all overlap between the D4 scan and
/// the other families is resolved by label cross-checks, and the special
/// λ = -1 members are checked against the congruence criteria.
pub fn enumerate_all(p: u64) -> Result<EnumReport> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let flags = special_families(p);
    let mut timings = Vec::new();

    let start = Instant::now();
    let d8_list = d8_enumerate(p)?;
    timings.push(PhaseTiming {
        phase: "d8".to_string(),
        seconds: start.elapsed().as_secs_f64(),
    });
    let start = Instant::now();
    let d10_list = d10_enumerate(p)?;
    timings.push(PhaseTiming {
        phase: "d10".to_string(),
        seconds: start.elapsed().as_secs_f64(),
    });
    let start = Instant::now();
    let d4_report = d4_enumerate_direct_report(p)?;
    timings.push(PhaseTiming {
        phase: "d4_direct".to_string(),
        seconds: start.elapsed().as_secs_f64(),
    });

    let count_of = |list: &[AutGroup], tag: AutGroup| list.iter().filter(|a| **a == tag).count();
    let d8_tags: Vec<AutGroup> = d8_list.iter().map(|c| c.aut()).collect();
    let d10_tags: Vec<AutGroup> = d10_list.iter().map(|c| c.aut()).collect();
    let d4_tags: Vec<AutGroup> = d4_report.classes.iter().map(|(_, a)| *a).collect();

    let counts = GroupCounts {
        d4: count_of(&d4_tags, AutGroup::D4),
        d8: count_of(&d8_tags, AutGroup::D8),
        d10: count_of(&d10_tags, AutGroup::D10),
        g32: count_of(&d8_tags, AutGroup::G32),
        g40: count_of(&d10_tags, AutGroup::G40),
        all: 0,
    };
    let counts = GroupCounts {
        all: counts.d4 + counts.d8 + counts.d10 + counts.g32 + counts.g40,
        ..counts
    };

    // The λ = -1 members must match the congruence criteria exactly.
    if (counts.g32 == 1) != flags.g32 || counts.g32 > 1 {
        return Err(Error::ConsistencyViolation(format!(
            "G32 count {} disagrees with the mod-16 criterion at p = {p}",
            counts.g32
        )));
    }
    if (counts.g40 == 1) != flags.g40 || counts.g40 > 1 {
        return Err(Error::ConsistencyViolation(format!(
            "G40 count {} disagrees with the mod-10 criterion at p = {p}",
            counts.g40
        )));
    }
    // The D4 scan sees every class except those with group exactly D10,
    // so its larger-group labels must reproduce the family counts.
    let scan_check = [
        (AutGroup::D8, counts.d8),
        (AutGroup::G32, counts.g32),
        (AutGroup::G40, counts.g40),
        (AutGroup::D10, 0),
    ];
    for (tag, expected) in scan_check {
        let got = count_of(&d4_tags, tag);
        if got != expected {
            return Err(Error::ConsistencyViolation(format!(
                "direct D4 scan found {got} classes labeled {} but the family enumerators found {expected} at p = {p}",
                tag.tag()
            )));
        }
    }

    let f4 = FieldDesc::new(p, 4)?;
    let mut representatives = Vec::new();
    for (form, aut) in &d4_report.classes {
        if *aut == AutGroup::D4 {
            representatives.push(CurveRecord::from_model(
                &f4,
                AutGroup::D4,
                &form.model(&f4)?,
                None,
            )?);
        }
    }
    for c in d8_list.iter().filter(|c| c.aut() == AutGroup::D8) {
        representatives.push(CurveRecord::from_model(
            &f4,
            AutGroup::D8,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?);
    }
    for c in d10_list.iter().filter(|c| c.aut() == AutGroup::D10) {
        representatives.push(CurveRecord::from_model(
            &f4,
            AutGroup::D10,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?);
    }
    for c in d8_list.iter().filter(|c| c.aut() == AutGroup::G32) {
        representatives.push(CurveRecord::from_model(
            &f4,
            AutGroup::G32,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?);
    }
    for c in d10_list.iter().filter(|c| c.aut() == AutGroup::G40) {
        representatives.push(CurveRecord::from_model(
            &f4,
            AutGroup::G40,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?);
    }

    Ok(EnumReport {
        p,
        counts,
        representatives,
        timings,
        degenerate_skipped: d4_report.degenerate_skipped,
    })
}

/// Find one superspecial curve with group properly containing the Klein
/// 4-group, cheapest evidence first:
///
/// 1. the congruence criteria (a G32 or G40 record costs no curve
///    arithmetic beyond the emit-time verification);
/// 2. a root of the D8 or D10 family polynomial beyond the forced
///    λ = -1;
/// 3. the direct D4 scan with a seed-shuffled parameter order and early
///    exit. Reaching this step means the family lists are empty, so any
///    hit has group exactly D4 and no exclusions are needed.
pub fn find_one(p: u64, seed: u64) -> Result<Option<CurveRecord>> {
    if p < 7 {
        return Err(Error::InvalidModulus(p));
    }
    let flags = special_families(p);
    if flags.g32 {
        let f2 = FieldDesc::new(p, 2)?;
        let minus1 = f2.int(-1);
        let model = d8_model(&f2, &minus1)?;
        return Ok(Some(CurveRecord::from_model(
            &f2,
            AutGroup::G32,
            &model,
            Some(&minus1),
        )?));
    }
    if flags.g40 {
        let f2 = FieldDesc::new(p, 2)?;
        let minus1 = f2.int(-1);
        let model = d10_model(&f2, &minus1)?;
        return Ok(Some(CurveRecord::from_model(
            &f2,
            AutGroup::G40,
            &model,
            Some(&minus1),
        )?));
    }

    let f4 = FieldDesc::new(p, 4)?;
    if let Some(c) = d8_enumerate(p)?.iter().find(|c| c.aut() == AutGroup::D8) {
        return Ok(Some(CurveRecord::from_model(
            &f4,
            AutGroup::D8,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?));
    }
    if let Some(c) = d10_enumerate(p)?.iter().find(|c| c.aut() == AutGroup::D10) {
        return Ok(Some(CurveRecord::from_model(
            &f4,
            AutGroup::D10,
            &c.model(&f4)?,
            Some(c.lambda()),
        )?));
    }

    match d4_find_exact(p, seed, &[])? {
        Some(form) => Ok(Some(CurveRecord::from_model(
            &f4,
            AutGroup::D4,
            &form.model(&f4)?,
            None,
        )?)),
        None => Ok(None),
    }
}

/// Scan report for the three conjectured patterns: (a) a curve with group
/// exactly D4 exists for every p >= 19 except p = 41; (b) no D8 class when
/// p = 3 (mod 8); (c) no D10 class when p = 3 or 7 (mod 10).
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub pmin: u64,
    pub pmax: u64,
    pub primes_checked: usize,
    /// Primes with no class labeled exactly D4 (p = 41 is the known
    /// exception, not a counterexample).
    pub d4_missing: Vec<u64>,
    /// Primes = 3 (mod 8) with a nonzero D8 count.
    pub d8_nonzero: Vec<u64>,
    /// Primes = 3 or 7 (mod 10) with a nonzero D10 count.
    pub d10_nonzero: Vec<u64>,
}

impl ConjectureReport {
    /// True counterexamples; the known p = 41 exception is excluded.
    pub fn counterexamples(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.d4_missing.iter().filter(|p| **p != 41) {
            out.push(format!("no curve with group exactly D4 at p = {p}"));
        }
        for p in &self.d8_nonzero {
            out.push(format!("D8 classes exist at p = {p} = 3 (mod 8)"));
        }
        for p in &self.d10_nonzero {
            out.push(format!(
                "D10 classes exist at p = {p} = {} (mod 10)",
                p % 10
            ));
        }
        out
    }

    pub fn known_exception_seen(&self) -> bool {
        self.d4_missing.contains(&41)
    }
}

/// Check the conjectured patterns for every prime in [pmin, pmax); primes
/// below 19 (outside the conjecture's domain) are skipped. Part (a) uses
/// the early-exit D4 search with the family members excluded, so a prime
/// passes as soon as one exact-D4 curve is found.
pub fn conjecture_scan(pmin: u64, pmax: u64, seed: u64) -> Result<ConjectureReport> {
    let mut report = ConjectureReport {
        pmin,
        pmax,
        primes_checked: 0,
        d4_missing: Vec::new(),
        d8_nonzero: Vec::new(),
        d10_nonzero: Vec::new(),
    };
    for p in primes_in(pmin.max(19), pmax) {
        report.primes_checked += 1;
        if p % 8 == 3 && d8_count(p)? != 0 {
            report.d8_nonzero.push(p);
        }
        if matches!(p % 10, 3 | 7) && d10_count(p)? != 0 {
            report.d10_nonzero.push(p);
        }
        let t8 = FieldDesc::new(p, 8)?;
        let mut exclusions = Vec::new();
        for c in d8_enumerate(p)? {
            exclusions.push(c.model(&t8)?.f().clone());
        }
        for c in d10_enumerate(p)? {
            exclusions.push(c.model(&t8)?.f().clone());
        }
        if d4_find_exact(p, seed ^ p, &exclusions)?.is_none() {
            report.d4_missing.push(p);
        }
    }
    Ok(report)
}

/// One summary-table row; `all` and `d4` are absent when the D4
/// enumeration was skipped for cost.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub all: Option<usize>,
    pub d4: Option<usize>,
    pub d8: usize,
    pub d10: usize,
    pub g32: usize,
    pub g40: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    /// Compute the D4 and All columns above the ceiling too.
    pub with_d4: bool,
    /// The D4 column is always computed for p <= this bound.
    pub d4_ceiling: u64,
    /// Worker threads; per-prime work is independent.
    pub jobs: usize,
}

impl Default for TableOptions {
    fn default() -> TableOptions {
        TableOptions {
            with_d4: false,
            d4_ceiling: 60,
            jobs: 1,
        }
    }
}

fn table_row(p: u64, opts: &TableOptions) -> Result<TableRow> {
    if opts.with_d4 || p <= opts.d4_ceiling {
        let report = enumerate_all(p)?;
        return Ok(TableRow {
            p,
            all: Some(report.counts.all),
            d4: Some(report.counts.d4),
            d8: report.counts.d8,
            d10: report.counts.d10,
            g32: report.counts.g32,
            g40: report.counts.g40,
        });
    }
    let flags = special_families(p);
    let d8 = d8_count(p)?;
    let d10 = d10_count(p)?;
    // The counts only reflect the polynomial degrees; also pin the λ = -1
    // membership itself to the congruence criteria.
    let fp = FieldDesc::new(p, 1)?;
    let minus1 = fp.int(-1);
    for (name, poly, expected) in [
        ("F", d8_f_poly(p)?, flags.g32),
        ("G", d10_g_poly(p)?, flags.g40),
    ] {
        let has_minus1 = poly::eval(&fp, &poly, &minus1).is_zero();
        if has_minus1 != expected {
            return Err(Error::ConsistencyViolation(format!(
                "λ = -1 membership in {name} disagrees with the congruence criterion at p = {p}"
            )));
        }
    }
    Ok(TableRow {
        p,
        all: None,
        d4: None,
        d8,
        d10,
        g32: flags.g32 as usize,
        g40: flags.g40 as usize,
    })
}

/// Summary-table rows for every prime in [pmin, pmax), ordered by p. The
/// D8/D10/G32/G40 columns are always computed; the D4 and All columns run
/// only for p <= `d4_ceiling` or when `with_d4` is set.
pub fn table_rows(pmin: u64, pmax: u64, opts: &TableOptions) -> Result<Vec<TableRow>> {
    let primes = primes_in(pmin.max(7), pmax);
    if opts.jobs <= 1 || primes.len() <= 1 {
        return primes.iter().map(|&p| table_row(p, opts)).collect();
    }
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<TableRow>>>> =
        primes.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..opts.jobs.min(primes.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= primes.len() {
                    break;
                }
                let row = table_row(primes[i], opts);
                *slots[i].lock().expect("row slot poisoned") = Some(row);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("row slot poisoned")
                .expect("every index was claimed by a worker")
        })
        .collect()
}

/// Render rows in the summary-table CSV schema; gated cells are empty.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("p,All,D4,D8,D10,G32,G40\n");
    for r in rows {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.p,
            opt(r.all),
            opt(r.d4),
            r.d8,
            r.d10,
            r.g32,
            r.g40
        ));
    }
    out
}

/// Verdict on a user-supplied model y^2 = f(x) over the prime field.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub p: u64,
    pub degree: usize,
    pub genus: usize,
    pub superspecial: bool,
}

/// Check a model given by integer coefficients (lowest degree first).
pub fn verify_model(p: u64, coeffs: &[i64]) -> Result<VerifyReport> {
    let fd = FieldDesc::new(p, 2)?;
    let f = Poly::from_ints(&fd, coeffs);
    let model = HyperellipticModel::new(&fd, f)?;
    Ok(VerifyReport {
        p,
        degree: model.degree(),
        genus: model.genus(),
        superspecial: cartier::is_superspecial(&fd, &model)?,
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the half-open range [lo, hi).
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}

fn fail(msg: String) -> Error {
    Error::ConsistencyViolation(msg)
}

/// Property suites over sampled primes; returns one summary line per
/// suite, or the first violated property as a `ConsistencyViolation`.
pub fn selftest(seed: u64) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    // Family polynomials: separable, self-reciprocal, degree parity tied
    // to the congruence class, all roots rational over F_{p^4}, λ = -1
    // membership matching the congruence criteria. The enumerators check
    // parity, rationality, and the λ = -1 criteria internally; the
    // polynomial shape properties are asserted here.
    let sample = [7u64, 19, 31, 41, 97, 199, 499];
    for &p in &sample {
        let fp = FieldDesc::new(p, 1)?;
        for (name, f) in [("F", d8_f_poly(p)?), ("G", d10_g_poly(p)?)] {
            if f.degree().unwrap_or(0) == 0 {
                continue;
            }
            if !poly::is_separable(&fp, &f)? {
                return Err(fail(format!("{name} is not separable at p = {p}")));
            }
            let mut rev = f.coeffs().to_vec();
            rev.reverse();
            let rev = Poly::new(&fp, rev)?;
            let lead = rev
                .leading()
                .expect("family polynomial has a nonzero constant term")
                .clone();
            let scaled = poly::mul_scalar(&fp, &f, &lead);
            if rev != scaled {
                return Err(fail(format!("{name} is not self-reciprocal at p = {p}")));
            }
        }
        d8_enumerate(p)?;
        d10_enumerate(p)?;
    }
    lines.push(format!(
        "ok: family polynomial laws at p in {sample:?} (separability, reciprocity, parity, rationality, λ=-1 criteria)"
    ));

    // Coefficient midpoint identities: writing f^e = sum_d c_d(λ) x^d for
    // either family model, the support of c_d is centered at d = 5e and
    // reflects as c_(5e-rk) = λ^k c_(5e+rk) for 0 <= k <= e, as polynomials
    // in λ. This pins both the coefficient formulas and their indexing.
    for &p in &sample {
        let tables = CoeffTables::new(p)?;
        let fp = tables.field().clone();
        let e = tables.e();
        for r in [4u64, 5] {
            for k in 0..=e {
                let lhs = tables.alpha_beta_poly(r, 5 * e - r * k)?;
                let rhs = poly::mul(
                    &fp,
                    &tables.alpha_beta_poly(r, 5 * e + r * k)?,
                    &Poly::monomial(&fp, &fp.one(), k as usize),
                );
                if lhs != rhs {
                    return Err(fail(format!(
                        "coefficient midpoint identity fails at p = {p}, r = {r}, k = {k}"
                    )));
                }
            }
        }
    }
    lines.push(format!(
        "ok: coefficient midpoint identities c(5e-rk) = λ^k c(5e+rk) at p in {sample:?}, all k"
    ));

    // Cartier-Manin support lattices: for the D8 family the (i, j) entry
    // lives on i p - j = e (mod 4); for the D10 family on i p - j = 0
    // (mod 5). Entries off the lattice vanish for every parameter.
    for &p in &[19u64, 97, 199] {
        let f2 = FieldDesc::new(p, 2)?;
        let e = (p - 1) / 2;
        for _ in 0..2 {
            let lambda = loop {
                let l = f2.random(&mut rng);
                if !l.is_zero() && !l.is_one() {
                    break l;
                }
            };
            let m8 = cartier::cm_matrix(&f2, &d8_model(&f2, &lambda)?)?;
            let m10 = cartier::cm_matrix(&f2, &d10_model(&f2, &lambda)?)?;
            for i in 1..=4u64 {
                for j in 1..=4u64 {
                    let d = i * p - j;
                    if d % 4 != e % 4 && !m8.entry(i as usize - 1, j as usize - 1).is_zero() {
                        return Err(fail(format!(
                            "D8 Cartier-Manin entry ({i},{j}) off the mod-4 lattice is nonzero at p = {p}"
                        )));
                    }
                    if d % 5 != 0 && !m10.entry(i as usize - 1, j as usize - 1).is_zero() {
                        return Err(fail(format!(
                            "D10 Cartier-Manin entry ({i},{j}) off the mod-5 lattice is nonzero at p = {p}"
                        )));
                    }
                }
            }
        }
    }
    lines.push("ok: Cartier-Manin support lattices at p in [19, 97, 199], 2 random parameters each".to_string());

    // Isomorphism criteria against the Mobius matcher: within each family,
    // H_λ1 and H_λ2 are isomorphic exactly when λ2 is λ1 or 1/λ1. Draw λ
    // as a 4th (resp. 5th) power so the branch loci split over F_{p^8}.
    let mut pairs = 0;
    for &p in &[19u64, 31, 41] {
        let f4 = FieldDesc::new(p, 4)?;
        let t8 = FieldDesc::new(p, 8)?;
        for r in [4u32, 5] {
            for _ in 0..9 {
                let draw = |rng: &mut ChaCha20Rng| loop {
                    let t = f4.random(rng);
                    let l = f4.pow(&t, r as u128);
                    if !l.is_zero() && !l.is_one() {
                        break l;
                    }
                };
                let l1 = draw(&mut rng);
                let l2 = if rng.next_u64() % 2 == 0 {
                    f4.inv(&l1)?
                } else {
                    draw(&mut rng)
                };
                let expected = l2 == l1 || l2 == f4.inv(&l1)?;
                let (m1, m2) = if r == 4 {
                    (d8_model(&t8, &l1)?, d8_model(&t8, &l2)?)
                } else {
                    (d10_model(&t8, &l1)?, d10_model(&t8, &l2)?)
                };
                let got = iso4::hyperelliptic_iso(&t8, m1.f(), m2.f())?;
                if got != expected {
                    return Err(fail(format!(
                        "isomorphism criterion mismatch for r = {r}, p = {p}: expected {expected}"
                    )));
                }
                pairs += 1;
            }
        }
    }
    lines.push(format!(
        "ok: isomorphism criteria vs Mobius matching, {pairs} random pairs at p in [19, 31, 41]"
    ));

    // Full enumeration consistency (label cross-checks and emit-time
    // re-verification run inside enumerate_all).
    for &p in &[19u64, 31, 41] {
        let report = enumerate_all(p)?;
        let c = report.counts;
        if c.all != c.d4 + c.d8 + c.d10 + c.g32 + c.g40 {
            return Err(fail(format!("count sum violated at p = {p}")));
        }
        if report.representatives.len() != c.all {
            return Err(fail(format!(
                "representative count differs from All at p = {p}"
            )));
        }
    }
    lines.push("ok: enumeration reports re-verified at p in [19, 31, 41]".to_string());

    // The search succeeds exactly when some class exists.
    for p in primes_in(7, 100) {
        let all = enumerate_all(p)?.counts.all;
        let found = find_one(p, seed)?.is_some();
        if found != (all > 0) {
            return Err(fail(format!(
                "find_one is {found} but All = {all} at p = {p}"
            )));
        }
    }
    lines.push("ok: find_one agrees with enumerate_all for 7 <= p < 100".to_string());

    Ok(lines)
}
