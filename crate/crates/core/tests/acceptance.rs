//! Acceptance gate: one test per criterion, each writing a PASS/FAIL line.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use norton_core::autos::{
    conjugation_identity_check, kernel_check_hamming, random_invertible, HammingAuto, SignedPermutation,
};
use norton_core::autos::{is_algebra_automorphism, is_table_automorphism};
use norton_core::families::{shipped_instances, symmetric_difference_feasible, SubsetIndex};
use norton_core::groups::DEFAULT_ENUMERATION_BUDGET;
use norton_core::norton::{
    classified_idempotents, eta_relations_check, find_identity, nilpotents_order2_classified,
    primitivity_facts_check, verify_isomorphism, verify_oracle_equivalence,
};
use norton_core::trees::{
    a000975, catalan, count_classes_exact, count_classes_witness, ominus_equivalence_check, CountMode,
    DEFAULT_EVALUATION_BUDGET, DEFAULT_WITNESS_ATTEMPTS,
};
use norton_core::{make_family, AlgebraVector, Cyclotomic, FamilyKind, FamilySpec, MonomialTable, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Writes the verdict past the test harness's output capture, then fails on FAIL.
fn report(n: u32, failures: &[String]) {
    let line = if failures.is_empty() {
        format!("criterion {n}: PASS\n")
    } else {
        format!("criterion {n}: FAIL ({})\n", failures.join("; "))
    };
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(failures.is_empty(), "{}", line.trim_end());
}

fn family(kind: FamilyKind) -> FamilySpec {
    make_family(kind).unwrap()
}

fn table(kind: FamilyKind, i: usize) -> MonomialTable {
    MonomialTable::from_family(&family(kind), i).unwrap()
}

fn criterion_one_instances() -> Vec<FamilyKind> {
    shipped_instances()
}

#[test]
fn criterion_01_spectrum_reproduction() {
    let mut failures = Vec::new();
    for kind in criterion_one_instances() {
        let f = family(kind);
        let mut predicted: BTreeMap<i64, usize> = BTreeMap::new();
        for i in 0..f.dims().len() {
            *predicted.entry(f.predicted_eigenvalue(i).unwrap()).or_default() +=
                f.predicted_dimension(i).unwrap() as usize;
        }
        let g = f.cayley_graph(DEFAULT_ENUMERATION_BUDGET).unwrap();
        let computed: BTreeMap<i64, usize> = g.spectrum().unwrap().integers().into_iter().collect();
        if computed != predicted {
            failures.push(format!("{kind}: spectrum {computed:?} vs {predicted:?}"));
        }
        if !g.verify_all_eigenvectors() {
            failures.push(format!("{kind}: eigenvector verification"));
        }
    }
    report(1, &failures);
}

fn check_chart(f: &FamilySpec, i: usize, chart: &[(&str, &str, Option<&str>)], failures: &mut Vec<String>) {
    let idx = |s: &str| f.canonical(&f.parse_index(s).unwrap());
    for &(a, b, expected) in chart {
        let got = f.closed_product_of(i, &idx(a), &idx(b)).unwrap();
        if got != expected.map(idx) {
            failures.push(format!("{}: V_{i} chi_{a} * chi_{b}", f.kind()));
        }
    }
}

#[test]
fn criterion_02_example_tables() {
    let mut failures = Vec::new();
    let h23 = family(FamilyKind::Hamming { n: 2, e: 3 });
    check_chart(&h23, 0, &[("00", "00", Some("00"))], &mut failures);
    let v1 = ["01", "02", "10", "20"];
    let v1_rows = [
        [Some("02"), None, None, None],
        [None, Some("01"), None, None],
        [None, None, Some("20"), None],
        [None, None, None, Some("10")],
    ];
    let v2 = ["11", "12", "21", "22"];
    let v2_rows = [
        [Some("22"), None, None, None],
        [None, Some("21"), None, None],
        [None, None, Some("12"), None],
        [None, None, None, Some("11")],
    ];
    for (i, names, rows) in [(1, v1, v1_rows), (2, v2, v2_rows)] {
        let chart: Vec<_> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (names[r], names[c], rows[r][c])))
            .collect();
        check_chart(&h23, i, &chart, &mut failures);
        if h23.dim(i).unwrap() != 4 {
            failures.push(format!("dim V_{i}(H(2,3))"));
        }
    }
    let q3 = family(FamilyKind::Hypercube { n: 3 });
    check_chart(
        &q3,
        2,
        &[
            ("12", "12", None),
            ("13", "13", None),
            ("23", "23", None),
            ("12", "13", Some("23")),
            ("13", "23", Some("12")),
            ("23", "12", Some("13")),
            ("13", "12", Some("23")),
            ("23", "13", Some("12")),
            ("12", "23", Some("13")),
        ],
        &mut failures,
    );
    let h4 = family(FamilyKind::HalvedCube { n: 4 });
    let basis: Vec<String> = h4.basis(2).unwrap().iter().map(|u| h4.format_index(u)).collect();
    if basis != ["12", "13", "14"] {
        failures.push(format!("V_2(1/2 Q_4) basis {basis:?}"));
    }
    check_chart(
        &h4,
        2,
        &[
            ("12", "12", None),
            ("13", "13", None),
            ("14", "14", None),
            ("12", "13", Some("23")),
            ("12", "13", Some("14")),
            ("12", "14", Some("24")),
            ("12", "14", Some("13")),
            ("13", "14", Some("34")),
            ("13", "14", Some("12")),
        ],
        &mut failures,
    );
    report(2, &failures);
}

#[test]
fn criterion_03_oracle_equivalence() {
    let mut failures = Vec::new();
    for kind in criterion_one_instances() {
        let f = family(kind);
        for i in 0..f.dims().len() {
            let r = verify_oracle_equivalence(&f, i, DEFAULT_ENUMERATION_BUDGET).unwrap();
            if !r.passed() || r.pairs_checked != r.dim * r.dim {
                failures.push(format!("{kind} V_{i}: {} mismatches", r.mismatches.len()));
            }
        }
    }
    report(3, &failures);
}

fn half(e: u32) -> Cyclotomic {
    Cyclotomic::from_rational(e, &Rational::new(1.into(), 2.into()))
}

#[test]
fn criterion_04_idempotent_suite() {
    let mut failures = Vec::new();
    for (e, expected) in [(3u32, 3usize), (4, 4), (5, 14)] {
        let found = classified_idempotents(e).unwrap();
        if found.len() != expected {
            failures.push(format!("e={e}: {} idempotents, expected {expected}", found.len()));
        }
        let f = family(FamilyKind::Hamming { n: 1, e });
        let t = MonomialTable::from_family(&f, 1).unwrap();
        for x in &found {
            if !t.is_idempotent(&x.vector).unwrap() {
                failures.push(format!("e={e}: support {:?} not idempotent", x.support));
            }
        }
    }
    let w = |e: u32, k: i64| Cyclotomic::root_power(e, k);
    let listed3 = vec![
        vec![("1", w(3, 0)), ("2", w(3, 0))],
        vec![("1", w(3, 1)), ("2", w(3, 2))],
        vec![("1", w(3, 2)), ("2", w(3, 1))],
    ];
    // ω = i for e = 4
    let h = half(4);
    let ih = &h * &w(4, 1);
    let listed4 = vec![
        vec![("2", h.clone()), ("1", h.clone()), ("3", h.clone())],
        vec![("2", h.clone()), ("1", -&h), ("3", -&h)],
        vec![("2", -&h), ("1", ih.clone()), ("3", -&ih)],
        vec![("2", -&h), ("1", -&ih), ("3", ih.clone())],
    ];
    for (e, listed) in [(3u32, listed3), (4, listed4)] {
        let f = family(FamilyKind::Hamming { n: 1, e });
        let want: HashSet<AlgebraVector> =
            listed.iter().map(|terms| AlgebraVector::from_named(&f, 1, terms).unwrap()).collect();
        let got: HashSet<AlgebraVector> = classified_idempotents(e).unwrap().into_iter().map(|x| x.vector).collect();
        if want != got {
            failures.push(format!("e={e}: idempotents differ from the listed ones"));
        }
    }
    for e in 3..=7 {
        if !eta_relations_check(e).unwrap() {
            failures.push(format!("eta relations e={e}"));
        }
        if !primitivity_facts_check(e).unwrap() {
            failures.push(format!("primitivity e={e}"));
        }
    }
    for e in [4u32, 6] {
        let t = table(FamilyKind::Hamming { n: 1, e }, 1);
        let nil = nilpotents_order2_classified(e).unwrap();
        if nil.is_empty() || nil.iter().any(|v| v.is_zero() || !t.product(v, v).unwrap().is_zero()) {
            failures.push(format!("nilpotents e={e}"));
        }
    }
    report(4, &failures);
}

#[test]
fn criterion_05_unitality() {
    let mut failures = Vec::new();
    for n in 1..=3 {
        for e in 2..=4 {
            let f = family(FamilyKind::Hamming { n, e });
            for i in 0..=n {
                let unit = find_identity(&f, i).unwrap();
                if unit.is_some() != (i == 0) {
                    failures.push(format!("H({n},{e}) V_{i}: identity {}", unit.is_some()));
                }
            }
        }
    }
    report(5, &failures);
}

fn spectrum_count(t: &MonomialTable, m: usize) -> (usize, CountMode) {
    let basis = t.basis_vectors();
    match count_classes_exact(t, &basis, m, DEFAULT_EVALUATION_BUDGET) {
        Ok(r) => (r.class_count, r.mode),
        Err(_) => {
            let r = count_classes_witness(t, &basis, m, 0, DEFAULT_WITNESS_ATTEMPTS).unwrap();
            (r.class_count, r.mode)
        }
    }
}

#[test]
fn criterion_06_associative_spectra() {
    let mut failures = Vec::new();
    for (kind, i) in [(FamilyKind::Hamming { n: 1, e: 3 }, 1), (FamilyKind::Hamming { n: 2, e: 3 }, 2)] {
        let t = table(kind, i);
        let basis = t.basis_vectors();
        for m in 1..=6 {
            let r = count_classes_exact(&t, &basis, m, DEFAULT_EVALUATION_BUDGET).unwrap();
            if r.class_count as u128 != a000975(m).unwrap() {
                failures.push(format!("{kind} V_{i} m={m}: {} classes", r.class_count));
            }
            if !ominus_equivalence_check(&t, &basis, m, DEFAULT_EVALUATION_BUDGET).unwrap() {
                failures.push(format!("{kind} V_{i} m={m}: partition differs from depth parity"));
            }
        }
    }
    for (kind, i) in [
        (FamilyKind::Hypercube { n: 3 }, 2),
        (FamilyKind::Hypercube { n: 4 }, 2),
        (FamilyKind::Hamming { n: 1, e: 4 }, 1),
    ] {
        let t = table(kind, i);
        for m in 0..=5 {
            let (count, mode) = spectrum_count(&t, m);
            if count as u128 != catalan(m) || mode != CountMode::Exact {
                failures.push(format!("{kind} V_{i} m={m}: {count} classes ({mode})"));
            }
        }
    }
    let mut zero = vec![(FamilyKind::Hypercube { n: 4 }, 3)];
    zero.extend((1..=6).map(|n| (FamilyKind::Hypercube { n }, 1)));
    for (kind, i) in zero {
        let t = table(kind, i);
        if !t.is_zero_product() {
            failures.push(format!("{kind} V_{i} has a nonzero product"));
        }
        for m in 0..=6 {
            let (count, _) = spectrum_count(&t, m);
            if count != 1 {
                failures.push(format!("{kind} V_{i} m={m}: {count} classes"));
            }
        }
    }
    report(6, &failures);
}

#[test]
fn criterion_07_witness_total_nonassociativity() {
    let mut failures = Vec::new();
    for (kind, i) in [(FamilyKind::Hamming { n: 3, e: 3 }, 2), (FamilyKind::Hamming { n: 2, e: 4 }, 1)] {
        let t = table(kind, i);
        let r = count_classes_witness(&t, &t.basis_vectors(), 6, 0, DEFAULT_WITNESS_ATTEMPTS).unwrap();
        if r.class_count != 132 || r.mode != CountMode::Exact {
            failures.push(format!("{kind} V_{i}: {} of 132 classes separated", r.class_count));
        }
    }
    report(7, &failures);
}

#[test]
fn criterion_08_automorphisms() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in 1..=3 {
        for e in 2..=4 {
            let f = family(FamilyKind::Hamming { n, e });
            for i in 0..=n {
                let t = MonomialTable::from_family(&f, i).unwrap();
                for _ in 0..100 {
                    let phi = HammingAuto::random(n, e, &mut rng);
                    if !is_table_automorphism(&phi.basis_map(&f, i).unwrap(), &t).unwrap() {
                        failures.push(format!("H({n},{e}) V_{i}: {phi:?}"));
                    }
                }
            }
        }
    }
    let h5 = family(FamilyKind::HalvedCube { n: 5 });
    let t5 = MonomialTable::from_family(&h5, 1).unwrap();
    let type_d = SignedPermutation::all_type_d(5);
    if type_d.len() != 1920 {
        failures.push(format!("|S_5^D| = {}", type_d.len()));
    }
    if !type_d.iter().all(|g| is_table_automorphism(&g.basis_map(&h5, 1).unwrap(), &t5).unwrap()) {
        failures.push("S_5^D on V_1(1/2 Q_5)".into());
    }
    let h6 = family(FamilyKind::HalvedCube { n: 6 });
    let bad = SignedPermutation::new((0..6).collect(), vec![-1, 1, 1, 1, 1, 1]).unwrap();
    if is_algebra_automorphism(&bad.basis_map_unchecked(&h6, 2).unwrap(), &h6, 2).unwrap() {
        failures.push("non-type-D map accepted on V_2(1/2 Q_6)".into());
    }
    for (kind, i, size) in [
        (FamilyKind::Hypercube { n: 3 }, 1, 1),
        (FamilyKind::Hypercube { n: 3 }, 2, 2),
        (FamilyKind::Hamming { n: 2, e: 3 }, 1, 1),
    ] {
        let r = kernel_check_hamming(&family(kind), i).unwrap();
        if r.matches() != Some(true) || r.kernel.len() != size {
            failures.push(format!("{kind} V_{i} kernel {:?}", r.kernel));
        }
    }
    let bil = family(FamilyKind::Bilinear { q: 2, d: 2, e: 2 });
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<(Vec<u32>, Vec<u32>)> =
        (0..20).map(|_| (random_invertible(2, 2, &mut rng), random_invertible(2, 2, &mut rng))).collect();
    for code in 0..16u32 {
        let x: Vec<u32> = (0..4).map(|k| code >> k & 1).collect();
        for (a, b) in &pairs {
            if !conjugation_identity_check(&bil, &x, a, b).unwrap() {
                failures.push(format!("conjugation x={x:?} a={a:?} b={b:?}"));
            }
        }
    }
    report(8, &failures);
}

/// Basis map from `a` to `b` given by a function on subset labels.
fn subset_map(a: &FamilySpec, i: usize, b: &FamilySpec, j: usize, f: impl Fn(SubsetIndex) -> SubsetIndex) -> Vec<usize> {
    let nb = b.kind().subset_n().unwrap();
    a.basis(i)
        .unwrap()
        .iter()
        .map(|u| {
            let t = f(SubsetIndex::from_word(u)).to_word(nb);
            b.position(j, &b.canonical(&t)).expect("image lies in the target basis")
        })
        .collect()
}

#[test]
fn criterion_09_isomorphisms() {
    let mut failures = Vec::new();
    let mut check = |label: &str, a: &FamilySpec, i: usize, b: &FamilySpec, j: usize, map: Vec<usize>| {
        let ta = MonomialTable::from_family(a, i).unwrap();
        let tb = MonomialTable::from_family(b, j).unwrap();
        if !verify_isomorphism(&map, &ta, &tb).unwrap() {
            failures.push(label.to_string());
        }
    };
    let fq4 = family(FamilyKind::FoldedCube { n: 4 });
    let q4 = family(FamilyKind::Hypercube { n: 4 });
    check("V_1(folded Q_4) ~ V_2(Q_4)", &fq4, 1, &q4, 2, subset_map(&fq4, 1, &q4, 2, |s| s));
    let h4 = family(FamilyKind::HalvedCube { n: 4 });
    let q3 = family(FamilyKind::Hypercube { n: 3 });
    let map = subset_map(&h4, 2, &q3, 2, |s| if s.contains(4) { s.complement(4) } else { s });
    check("V_2(1/2 Q_4) ~ V_2(Q_3)", &h4, 2, &q3, 2, map);
    for (i, n) in [(1, 4), (1, 5), (2, 7)] {
        let h = family(FamilyKind::HalvedCube { n });
        let q = family(FamilyKind::Hypercube { n });
        check(&format!("V_{i}(1/2 Q_{n}) ~ V_{i}(Q_{n})"), &h, i, &q, i, subset_map(&h, i, &q, i, |s| s));
    }
    let fh8 = family(FamilyKind::FoldedHalfCube { n: 8 });
    let h8 = family(FamilyKind::HalvedCube { n: 8 });
    check("V_1(1/2 folded Q_8) ~ V_2(1/2 Q_8)", &fh8, 1, &h8, 2, subset_map(&fh8, 1, &h8, 2, |s| s));

    let h23 = family(FamilyKind::Hamming { n: 2, e: 3 });
    let t = MonomialTable::from_family(&h23, 2).unwrap();
    let h13 = table(FamilyKind::Hamming { n: 1, e: 3 }, 1);
    let product = MonomialTable::direct_product(&[h13.clone(), h13]).unwrap();
    // pairing {11,22} and {12,21}: copy 0 holds (χ_1, χ_2), copy 1 likewise
    let target = |s: &str| match s {
        "11" => 0,
        "22" => 1,
        "12" => 2,
        "21" => 3,
        _ => unreachable!(),
    };
    let map: Vec<usize> = h23.basis(2).unwrap().iter().map(|u| target(&h23.format_index(u))).collect();
    if !verify_isomorphism(&map, &t, &product).unwrap() {
        failures.push("V_2(H(2,3)) ~ V_1(H(1,3)) x V_1(H(1,3))".into());
    }
    report(9, &failures);
}

#[test]
fn criterion_10_combinatorial_lemmas() {
    let mut failures = Vec::new();
    for n in 0..=10usize {
        let sets: Vec<u64> = (0..1u64 << n).collect();
        let mut seen = vec![vec![false; n + 1]; n + 1];
        for &s in &sets {
            for &t in &sets {
                if s.count_ones() == t.count_ones() {
                    seen[s.count_ones() as usize][(s ^ t).count_ones() as usize] = true;
                }
            }
        }
        for (i, row) in seen.iter().enumerate() {
            for (j, &hit) in row.iter().enumerate() {
                if symmetric_difference_feasible(n, i, j) != hit {
                    failures.push(format!("feasibility n={n} i={i} j={j}"));
                }
            }
        }
    }
    for n in 2..=8usize {
        let f = family(FamilyKind::HalvedCube { n });
        let vertices = f.vertices(DEFAULT_ENUMERATION_BUDGET).unwrap();
        let mut classes: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
        for s in 0..1u64 << n {
            let u = SubsetIndex(s).to_word(n);
            let row: Vec<u32> = vertices.iter().map(|x| f.group().pairing(&u, x)).collect();
            classes.entry(row).or_default().push(s);
        }
        let full = (1u64 << n) - 1;
        for members in classes.values() {
            let s = members[0];
            let mut want = vec![s, s ^ full];
            want.sort_unstable();
            if members != &want {
                failures.push(format!("n={n}: characters {members:?} coincide"));
            }
        }
    }
    report(10, &failures);
}
