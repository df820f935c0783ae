//! End-to-end gates for the whole pipeline. Each test pins one deliverable
//! against independently recorded counts (`data/class_counts.csv`), an
//! independent recomputation, or a stated law, and prints a PASS line with
//! the measured evidence (visible with `--nocapture`).

use std::collections::BTreeSet;
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssp4_core::app::{
    conjecture_scan, enumerate_all, find_one, primes_in, selftest, table_rows, AutGroup,
    TableOptions,
};
use ssp4_core::cartier;
use ssp4_core::family_d10::d10_g_poly;
use ssp4_core::family_d4::{d4_enumerate, d4_enumerate_direct};
use ssp4_core::family_d8::{d8_f_poly, d8_model};
use ssp4_core::fields::{FieldDesc, FieldElement};
use ssp4_core::genus2::{
    enumerate_rosenhain, relabelings, rosenhain_superspecial, RosenhainTriple,
};
use ssp4_core::hypergeom::CoeffTables;
use ssp4_core::iso4::{
    branch_locus, hyperelliptic_iso, locus_equivalent, mobius_through, MobiusMap, P1Point,
};
use ssp4_core::poly::{self, Poly};

struct KnownRow {
    p: u64,
    all: usize,
    d4: usize,
    d8: usize,
    d10: usize,
    g32: usize,
    g40: usize,
}

/// Reference per-prime class counts, transcribed once and frozen.
fn known_rows() -> Vec<KnownRow> {
    let text = include_str!("data/class_counts.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,All,D4,D8,D10,G32,G40"));
    lines
        .map(|line| {
            let cells: Vec<u64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells.len(), 7, "malformed row `{line}`");
            KnownRow {
                p: cells[0],
                all: cells[1] as usize,
                d4: cells[2] as usize,
                d8: cells[3] as usize,
                d10: cells[4] as usize,
                g32: cells[5] as usize,
                g40: cells[6] as usize,
            }
        })
        .collect()
}

/// The one cell where the bundled reference table contradicts itself:
/// at p = 487 it prints D8 = 1 next to All = 40, but its six group cells
/// then sum to 39. The corrected value 2 restores the row's own All sum.
/// The transcription in `data/class_counts.csv` is kept verbatim; `c01`
/// applies this correction and then re-proves it from scratch with
/// [`independent_d8_count`], so the corrected cell is held to a stricter
/// standard than plain table equality, not a weaker one.
const D8_ERRATA: [(u64, usize, usize); 1] = [(487, 1, 2)];

/// Recount the D8-family classes with no closed-form coefficient formulas:
/// expand the model power bivariately, gcd the two designated coefficient
/// polynomials, find the roots over F_{p^4}, and split the root set into
/// λ <-> 1/λ orbits. Every root is re-verified superspecial by a direct
/// Cartier-Manin computation (independent of the designated-index theory),
/// distinct orbits are checked pairwise non-isomorphic over F_{p^8}, and a
/// self-inverse root (λ = -1, the C16:C2 member) is excluded from the count
/// exactly as the production counter excludes it.
fn independent_d8_count(p: u64) -> usize {
    let tables = CoeffTables::new(p).unwrap();
    let oracle = expanded_coefficients(&tables, 4);
    let (i, j) = match p % 8 {
        1 => (3, 4),
        3 => (4, 3),
        5 => (1, 2),
        _ => (2, 1),
    };
    let a = &oracle[(3 * p - i) as usize];
    let b = &oracle[(4 * p - j) as usize];
    assert_eq!(
        a,
        &tables.alpha_beta_poly(4, 3 * p - i).unwrap(),
        "expansion differs from the coefficient formulas at index 3p-{i}, p = {p}"
    );
    assert_eq!(
        b,
        &tables.alpha_beta_poly(4, 4 * p - j).unwrap(),
        "expansion differs from the coefficient formulas at index 4p-{j}, p = {p}"
    );
    let fp = tables.field();
    let f = poly::gcd(fp, a, b).unwrap();
    assert_eq!(
        f,
        d8_f_poly(p).unwrap(),
        "gcd differs from the production family polynomial at p = {p}"
    );
    let f4 = FieldDesc::new(p, 4).unwrap();
    let t8 = FieldDesc::new(p, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0487);
    let roots = poly::roots_in(&f4, &f, &mut rng).unwrap();
    assert_eq!(
        Some(roots.len()),
        f.degree(),
        "family roots must all be rational over the degree-4 extension at p = {p}"
    );
    let mut classes: Vec<FieldElement> = Vec::new();
    for l in &roots {
        assert!(!l.is_zero() && *l != f4.one(), "degenerate parameter at p = {p}");
        let model = d8_model(&f4, l).unwrap();
        assert!(
            cartier::cm_matrix(&f4, &model).unwrap().is_zero(),
            "root fails the direct superspeciality check at p = {p}"
        );
        let inv = f4.inv(l).unwrap();
        if inv == *l {
            assert_eq!(*l, f4.int(-1));
            continue;
        }
        if classes.iter().any(|c| c == l || *c == inv) {
            continue;
        }
        classes.push(l.clone());
    }
    for x in 0..classes.len() {
        for y in x + 1..classes.len() {
            let mx = d8_model(&t8, &classes[x]).unwrap();
            let my = d8_model(&t8, &classes[y]).unwrap();
            assert!(
                !hyperelliptic_iso(&t8, mx.f(), my.f()).unwrap(),
                "distinct parameter orbits give isomorphic curves at p = {p}"
            );
        }
    }
    classes.len()
}

#[test]
fn c01_fast_columns_match_reference_counts() {
    let rows = known_rows();
    assert_eq!(rows.len(), 88, "reference table must cover [19, 500)");
    assert_eq!(
        rows.iter().map(|r| r.p).collect::<Vec<_>>(),
        primes_in(19, 500)
    );
    let opts = TableOptions {
        with_d4: false,
        d4_ceiling: 0,
        jobs: 1,
    };
    let mut worst = 0.0f64;
    for want in &rows {
        let want_d8 = D8_ERRATA
            .iter()
            .find(|&&(p, _, _)| p == want.p)
            .map(|&(_, _, corrected)| corrected)
            .unwrap_or(want.d8);
        let start = Instant::now();
        let got = table_rows(want.p, want.p + 1, &opts).unwrap();
        let dt = start.elapsed().as_secs_f64();
        worst = worst.max(dt);
        assert!(
            dt < 2.0,
            "counts path took {dt:.2} s at p = {}, budget is 2 s",
            want.p
        );
        assert_eq!(got.len(), 1);
        let got = &got[0];
        assert!(got.all.is_none() && got.d4.is_none());
        assert_eq!(
            (got.d8, got.d10, got.g32, got.g40),
            (want_d8, want.d10, want.g32, want.g40),
            "fast columns differ at p = {}",
            want.p
        );
    }
    // Each correction must stay forced: the printed row contradicts its own
    // All column, the corrected value restores the sum, and the independent
    // recount reproduces it with no closed forms anywhere.
    for &(p, printed, corrected) in &D8_ERRATA {
        let row = rows.iter().find(|r| r.p == p).unwrap();
        assert_eq!(
            row.d8, printed,
            "transcription changed out from under the erratum at p = {p}"
        );
        assert_ne!(
            row.d4 + printed + row.d10 + row.g32 + row.g40,
            row.all,
            "printed row is self-consistent at p = {p}; erratum no longer justified"
        );
        assert_eq!(
            row.d4 + corrected + row.d10 + row.g32 + row.g40,
            row.all,
            "corrected value does not restore the All sum at p = {p}"
        );
        assert_eq!(
            independent_d8_count(p),
            corrected,
            "independent recount disagrees with the correction at p = {p}"
        );
    }
    println!(
        "PASS fast columns: D8/D10/G32/G40 match the reference for all 88 primes in [19, 500) \
         ({} cell corrected where the source row contradicts its own All sum, re-proved independently), \
         worst per-prime time {worst:.3} s",
        D8_ERRATA.len()
    );
}

#[test]
fn c02_d4_column_at_small_primes() {
    let expected: [(u64, usize); 8] = [
        (19, 1),
        (23, 1),
        (29, 1),
        (31, 1),
        (37, 3),
        (41, 0),
        (43, 2),
        (47, 4),
    ];
    let rows = known_rows();
    for (p, d4) in expected {
        let report = enumerate_all(p).unwrap();
        assert_eq!(report.counts.d4, d4, "D4 count at p = {p}");
        let want = rows.iter().find(|r| r.p == p).unwrap();
        assert_eq!(
            (
                report.counts.all,
                report.counts.d4,
                report.counts.d8,
                report.counts.d10,
                report.counts.g32,
                report.counts.g40
            ),
            (want.all, want.d4, want.d8, want.d10, want.g32, want.g40),
            "full row at p = {p}"
        );
    }
    println!(
        "PASS D4 column: (1, 1, 1, 1, 3, 0, 2, 4) reproduced by the direct scan for p in {{19, 23, 29, 31, 37, 41, 43, 47}}, full rows included"
    );
}

#[test]
fn c03_no_classes_below_19() {
    for p in [7u64, 11, 13, 17] {
        let report = enumerate_all(p).unwrap();
        assert_eq!(report.counts.all, 0, "nonzero count at p = {p}");
        assert!(report.representatives.is_empty());
    }
    println!("PASS nonexistence: zero classes for p in {{7, 11, 13, 17}}");
}

#[test]
fn c04_degree_parity_laws_to_2000() {
    let primes = primes_in(7, 2000);
    for &p in &primes {
        let f_deg = d8_f_poly(p).unwrap().degree().unwrap_or(0);
        assert_eq!(
            f_deg % 2 == 1,
            matches!(p % 16, 9 | 15),
            "deg F = {f_deg} has the wrong parity at p = {p}"
        );
        let g_deg = d10_g_poly(p).unwrap().degree().unwrap_or(0);
        assert_eq!(
            g_deg % 2 == 1,
            p % 10 == 9,
            "deg G = {g_deg} has the wrong parity at p = {p}"
        );
    }
    println!(
        "PASS parity: deg F odd iff p = 9, 15 (mod 16) and deg G odd iff p = 9 (mod 10), all {} primes in [7, 2000)",
        primes.len()
    );
}

/// Expand the family model to the e-th power as a dense polynomial in x
/// whose coefficients are polynomials in the parameter, by repeated
/// sparse multiplication. Completely independent of the closed-form
/// coefficient route.
fn expanded_coefficients(tables: &CoeffTables, r: u64) -> Vec<Poly> {
    let fp = tables.field();
    let one = Poly::from_ints(fp, &[1]);
    let param = Poly::from_ints(fp, &[0, 1]);
    let neg_one_plus = poly::mul_scalar(fp, &Poly::from_ints(fp, &[1, 1]), &fp.int(-1));
    let terms: Vec<(usize, Poly)> = match r {
        4 => vec![(9, one.clone()), (5, neg_one_plus), (1, param)],
        5 => vec![(10, one.clone()), (5, neg_one_plus), (0, param)],
        _ => unreachable!(),
    };
    let mut acc = vec![one];
    for _ in 0..tables.e() {
        let mut next = vec![Poly::zero(); acc.len() + terms[0].0];
        for (d, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, t) in &terms {
                next[d + k] = poly::add(fp, &next[d + k], &poly::mul(fp, c, t));
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn c05_coefficient_polynomials_match_expansion() {
    let primes = [7u64, 11, 13, 17, 19, 23, 29, 31];
    let mut checked = 0usize;
    for &p in &primes {
        let tables = CoeffTables::new(p).unwrap();
        for r in [4u64, 5] {
            let oracle = expanded_coefficients(&tables, r);
            let bound = if r == 4 { 9 } else { 10 } * tables.e();
            assert_eq!(oracle.len() as u64, bound + 1);
            for d in 0..=bound {
                assert_eq!(
                    tables.alpha_beta_poly(r, d).unwrap(),
                    oracle[d as usize],
                    "coefficient of x^{d} differs for r = {r}, p = {p}"
                );
                checked += 1;
            }
        }
    }
    println!(
        "PASS coefficients: closed form equals direct expansion at every index, r in {{4, 5}}, p in {primes:?} ({checked} comparisons)"
    );
}

/// Every superspecial Rosenhain triple over F_{p^2} by brute force, one
/// sorted representative per unordered triple (superspeciality does not
/// depend on coordinate order).
fn exhaustive_rosenhain(p: u64) -> BTreeSet<RosenhainTriple> {
    let fd = FieldDesc::new(p, 2).unwrap();
    let mut elems: Vec<FieldElement> = (0..fd.order())
        .map(|n| fd.element_from_index(n))
        .filter(|x| !x.is_zero() && !x.is_one())
        .collect();
    elems.sort();
    let mut out = BTreeSet::new();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            for k in j + 1..elems.len() {
                let t = RosenhainTriple::new(
                    &fd,
                    elems[i].clone(),
                    elems[j].clone(),
                    elems[k].clone(),
                )
                .unwrap();
                if rosenhain_superspecial(&fd, &t).unwrap() {
                    out.insert(t.sorted());
                }
            }
        }
    }
    out
}

#[test]
fn c06_rosenhain_enumeration_matches_exhaustive_scan() {
    let mut sizes = Vec::new();
    for p in [7u64, 11, 13] {
        let fast = enumerate_rosenhain(p).unwrap();
        let brute = exhaustive_rosenhain(p);
        assert_eq!(fast, brute, "triple sets differ at p = {p}");
        sizes.push(fast.len());
    }
    // Orbit closure at the next prime with a nonempty set: relabeling any
    // enumerated triple lands back in the enumerated set.
    let fd = FieldDesc::new(23, 2).unwrap();
    let set = enumerate_rosenhain(23).unwrap();
    assert!(!set.is_empty());
    for t in &set {
        for r in relabelings(&fd, t).unwrap() {
            assert!(
                set.contains(&r.triple.sorted()),
                "orbit escapes the enumerated set at {:?}",
                r.triple
            );
        }
    }
    println!(
        "PASS genus-2 step: enumeration equals the exhaustive scan for p in {{7, 11, 13}} (sizes {sizes:?}), orbit-closed at p = 23 ({} triples)",
        set.len()
    );
}

#[test]
fn c07_d4_construction_paths_agree() {
    for p in [19u64, 23, 29, 31] {
        let via_pairs = d4_enumerate(p).unwrap();
        let direct = d4_enumerate_direct(p).unwrap();
        assert_eq!(
            via_pairs.len(),
            direct.len(),
            "class counts differ at p = {p}"
        );
        let t8 = FieldDesc::new(p, 8).unwrap();
        let direct_loci: Vec<_> = direct
            .iter()
            .map(|(form, aut)| {
                let locus = branch_locus(&t8, form.model(&t8).unwrap().f()).unwrap();
                (locus, *aut)
            })
            .collect();
        let mut used = vec![false; direct_loci.len()];
        for (form, aut) in &via_pairs {
            let locus = branch_locus(&t8, form.model(&t8).unwrap().f()).unwrap();
            let mut matched = false;
            for (i, (dlocus, daut)) in direct_loci.iter().enumerate() {
                if !used[i] && locus_equivalent(&t8, &locus, dlocus).unwrap() {
                    assert_eq!(aut, daut, "labels differ on a matched class at p = {p}");
                    used[i] = true;
                    matched = true;
                    break;
                }
            }
            assert!(matched, "class from the pair construction unmatched at p = {p}");
        }
    }
    // The one prime in range with no class of group exactly D4: the pair
    // construction still sees the larger-group class, correctly labeled.
    let at41 = d4_enumerate(41).unwrap();
    assert_eq!(at41.len(), 1);
    assert_eq!(at41[0].1, AutGroup::G32);
    println!(
        "PASS D4 paths: pair construction and direct scan agree class-by-class with labels for p in {{19, 23, 29, 31}}; p = 41 yields exactly the G32 class"
    );
}

#[test]
fn c08_property_suites() {
    let lines = selftest(0xACCE_55).unwrap();
    assert_eq!(lines.len(), 6);
    for line in &lines {
        assert!(line.starts_with("ok: "), "unexpected suite line: {line}");
        println!("  {line}");
    }
    println!("PASS property suites: all 6 suites passed on sampled primes up to 499");
}

#[test]
fn c09_search_succeeds_on_range() {
    for p in [7u64, 11, 13, 17] {
        assert!(find_one(p, 1).unwrap().is_none(), "spurious hit at p = {p}");
    }
    let primes = primes_in(19, 200);
    let start = Instant::now();
    for &p in &primes {
        let record = find_one(p, 0xF1AD ^ p)
            .unwrap()
            .unwrap_or_else(|| panic!("no curve found at p = {p}"));
        assert!(record.superspecial);
        assert_eq!(record.p, p);
    }
    println!(
        "PASS search: find_one produced a verified record for all {} primes in [19, 200) in {:.1} s, and none below 19",
        primes.len(),
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn c10_conjecture_holds_to_500() {
    let start = Instant::now();
    let report = conjecture_scan(19, 500, 0xC0DE).unwrap();
    assert_eq!(report.primes_checked, 88);
    assert_eq!(report.d4_missing, vec![41], "exact-D4 existence exceptions");
    assert!(report.d8_nonzero.is_empty(), "{:?}", report.d8_nonzero);
    assert!(report.d10_nonzero.is_empty(), "{:?}", report.d10_nonzero);
    assert!(report.counterexamples().is_empty());
    assert!(report.known_exception_seen());
    println!(
        "PASS conjecture: over [19, 500) the only prime without an exact-D4 curve is 41, and no parity-pattern violations, in {:.0} s",
        start.elapsed().as_secs_f64()
    );
}

/// All 60 ordered triples of distinct indices into a 5-element set.
fn ordered_index_triples() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(60);
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                if a != b && a != c && b != c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Exact number of third coordinates lambda3 such that the curve of
/// (l1, l2, lambda3) is isomorphic to that of (l1, l2, lambda3') for some
/// lambda3' != lambda3. An isomorphism is a Mobius map M with
/// M(S + {lambda3}) = S + {lambda3'} where S = {0, 1, inf, l1, l2}, and
/// splits by where M sends S:
///
/// * M(S) = S: lambda3' = M(lambda3), so every non-fixed lambda3 is bad;
/// * exactly one s in S leaves (M(s) = lambda3'): then lambda3 is the
///   preimage of the one point of S missed by M(S \ {s}).
fn bad_third_coordinates(
    fd: &FieldDesc,
    elems: &[FieldElement],
    triples: &[[usize; 3]],
    l1: &FieldElement,
    l2: &FieldElement,
) -> usize {
    let s_pts: [P1Point; 5] = [
        P1Point::Finite(fd.zero()),
        P1Point::Finite(fd.one()),
        P1Point::Infinity,
        P1Point::Finite(l1.clone()),
        P1Point::Finite(l2.clone()),
    ];
    let in_s = |x: &P1Point| s_pts.contains(x);
    let frame = [s_pts[0].clone(), s_pts[1].clone(), s_pts[2].clone()];
    let valid_count = elems.len() - 2; // excluding l1 and l2

    // Setwise stabilizer of S, identity excluded.
    let mut stabilizer: Vec<MobiusMap> = Vec::new();
    for idx in triples {
        if *idx == [0, 1, 2] {
            continue;
        }
        let dst = [
            s_pts[idx[0]].clone(),
            s_pts[idx[1]].clone(),
            s_pts[idx[2]].clone(),
        ];
        let m = mobius_through(fd, &frame, &dst).unwrap();
        if in_s(&m.apply(fd, &s_pts[3])) && in_s(&m.apply(fd, &s_pts[4])) {
            stabilizer.push(m);
        }
    }

    // Maps sending exactly one point of S to the new third coordinate.
    let mut bad_exits: BTreeSet<FieldElement> = BTreeSet::new();
    for leaving in 0..5 {
        let rest: Vec<&P1Point> = (0..5).filter(|i| *i != leaving).map(|i| &s_pts[i]).collect();
        let src = [rest[0].clone(), rest[1].clone(), rest[2].clone()];
        for idx in triples {
            let dst = [
                s_pts[idx[0]].clone(),
                s_pts[idx[1]].clone(),
                s_pts[idx[2]].clone(),
            ];
            let m = mobius_through(fd, &src, &dst).unwrap();
            let fourth = m.apply(fd, rest[3]);
            if !in_s(&fourth) || dst.contains(&fourth) {
                continue;
            }
            let new_third = m.apply(fd, &s_pts[leaving]);
            if in_s(&new_third) {
                continue;
            }
            let missed = s_pts
                .iter()
                .find(|z| !dst.contains(z) && **z != fourth)
                .expect("five points, four images inside S");
            let preimage = m.inverse(fd).apply(fd, missed);
            if let P1Point::Finite(x) = &preimage {
                if !in_s(&preimage) && new_third != preimage {
                    bad_exits.insert(x.clone());
                }
            }
        }
    }

    if stabilizer.is_empty() {
        return bad_exits.len();
    }
    // With a nontrivial stabilizer almost every third coordinate is bad;
    // survivors are the common fixed points not already bad by exit.
    let survivors = elems
        .iter()
        .filter(|x| *x != l1 && *x != l2)
        .filter(|x| {
            let pt = P1Point::Finite((*x).clone());
            stabilizer.iter().all(|m| m.apply(fd, &pt) == pt)
        })
        .filter(|x| !bad_exits.contains(x))
        .count();
    valid_count - survivors
}

#[test]
fn c11_relabeling_collision_rate_bound() {
    let triples = ordered_index_triples();
    for p in [19u64, 23, 29] {
        let fd = FieldDesc::new(p, 2).unwrap();
        let elems: Vec<FieldElement> = (0..fd.order())
            .map(|n| fd.element_from_index(n))
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect();
        let q = fd.order() as f64;

        // Bad counts are symmetric in (l1, l2), so scan i < j and double.
        let next = std::sync::atomic::AtomicUsize::new(0);
        let total_bad = std::sync::Mutex::new(0u64);
        let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut local = 0u64;
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= elems.len() {
                            break;
                        }
                        for j in i + 1..elems.len() {
                            local += 2 * bad_third_coordinates(
                                &fd,
                                &elems,
                                &triples,
                                &elems[i],
                                &elems[j],
                            ) as u64;
                        }
                    }
                    *total_bad.lock().unwrap() += local;
                });
            }
        });
        let total_bad = total_bad.into_inner().unwrap();

        let all_triples = (q - 2.0) * (q - 3.0) * (q - 4.0);
        let fraction = total_bad as f64 / all_triples;
        let bound = 20.0 / (p * p) as f64;
        assert!(
            fraction <= bound,
            "collision fraction {fraction:.3e} exceeds 20/p^2 = {bound:.3e} at p = {p}"
        );
        println!(
            "  p = {p}: {total_bad} of {all_triples:.0} ordered triples collide, fraction {fraction:.3e} <= {bound:.3e}"
        );
    }
    println!("PASS collision rate: relabeling collisions stay under 20/p^2 for p in {{19, 23, 29}}");
}
