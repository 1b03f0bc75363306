use std::collections::BTreeMap;
use std::fmt::Write as _;

use norton_core::autos::{
    conjugation_identity_check, is_table_automorphism, kernel_check_hamming, random_invertible, BilinearAuto,
    HammingAuto, KernelReport, SignedPermutation, KERNEL_MAX_E, KERNEL_MAX_N,
};
use norton_core::families::SubsetIndex;
use norton_core::norton::{
    classified_idempotents, eta_relations_check, nilpotents_order2_classified, primitivity_facts_check,
    verify_isomorphism, verify_oracle_equivalence, PRIMITIVITY_MAX_E,
};
use norton_core::trees::{a000975, count_classes_exact, count_classes_witness, SpectrumReport};
use norton_core::{make_family, Error, FamilyKind, FamilySpec, MonomialTable, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Config, CountModeArg, Format, IsoKind};

pub struct Output {
    pub text: String,
    pub passed: bool,
}

type Result<T> = std::result::Result<T, Error>;

fn json_output(value: &impl Serialize, passed: bool) -> Result<Output> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(Output { text, passed })
}

fn csv_output(rows: Vec<Vec<String>>, passed: bool) -> Result<Output> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Output { text: String::from_utf8(bytes).expect("csv output is utf-8"), passed })
}

fn no_csv(cfg: &Config, command: &str) -> Result<()> {
    if cfg.format == Format::Csv {
        return Err(Error::Unsupported(format!("{command} has no CSV form; use json or text")));
    }
    Ok(())
}

fn family(cfg: &Config, kind: &FamilyKind) -> Result<FamilySpec> {
    FamilySpec::new(*kind, cfg.budget)
}

#[derive(Serialize)]
struct SpectrumRow {
    i: usize,
    eigenvalue: i64,
    multiplicity: usize,
    predicted_eigenvalue: i64,
    predicted_multiplicity: u128,
    #[serde(rename = "match")]
    matches: bool,
}

#[derive(Serialize)]
struct SpectrumOut {
    family: String,
    vertices: usize,
    degree: usize,
    rows: Vec<SpectrumRow>,
    unexpected: Vec<(i64, usize)>,
    eigenvectors_verified: bool,
    status: &'static str,
}

pub fn spectrum(cfg: &Config, kind: &FamilyKind) -> Result<Output> {
    let f = family(cfg, kind)?;
    let g = f.cayley_graph(cfg.budget)?;
    let computed: BTreeMap<i64, usize> = g.spectrum()?.integers().into_iter().collect();
    let mut predicted: BTreeMap<i64, u128> = BTreeMap::new();
    let mut rows = Vec::new();
    for i in 0..f.dims().len() {
        let (theta, dim) = (f.predicted_eigenvalue(i)?, f.predicted_dimension(i)?);
        *predicted.entry(theta).or_default() += dim;
        rows.push(SpectrumRow {
            i,
            eigenvalue: theta,
            multiplicity: computed.get(&theta).copied().unwrap_or(0),
            predicted_eigenvalue: theta,
            predicted_multiplicity: dim,
            matches: false,
        });
    }
    rows.sort_by_key(|r| std::cmp::Reverse(r.eigenvalue));
    for row in rows.iter_mut() {
        row.matches = predicted[&row.eigenvalue] == row.multiplicity as u128;
    }
    let unexpected: Vec<(i64, usize)> =
        computed.iter().filter(|(v, _)| !predicted.contains_key(v)).map(|(&v, &m)| (v, m)).collect();
    let verified = g.verify_all_eigenvectors();
    let passed = verified && unexpected.is_empty() && rows.iter().all(|r| r.matches);
    let out = SpectrumOut {
        family: kind.to_string(),
        vertices: g.vertices().len(),
        degree: g.degree(),
        rows,
        unexpected,
        eigenvectors_verified: verified,
        status: if passed { "OK" } else { "MISMATCH" },
    };
    match cfg.format {
        Format::Json => json_output(&out, passed),
        Format::Csv => {
            let mut rows = vec![vec!["eigenvalue".to_string(), "multiplicity".to_string()]];
            for (v, m) in computed.iter().rev() {
                rows.push(vec![v.to_string(), m.to_string()]);
            }
            csv_output(rows, passed)
        }
        Format::Text => {
            let mut t = format!("{} ({} vertices, degree {})\n", out.family, out.vertices, out.degree);
            let _ = writeln!(t, "{:>3} {:>10} {:>12} {:>10}", "i", "eigenvalue", "multiplicity", "predicted");
            for r in &out.rows {
                let _ = writeln!(
                    t,
                    "{:>3} {:>10} {:>12} {:>10}",
                    r.i,
                    r.eigenvalue,
                    r.multiplicity,
                    format!("{}x{}", r.predicted_eigenvalue, r.predicted_multiplicity)
                );
            }
            let _ = writeln!(t, "eigenvectors verified: {}\nstatus: {}", out.eigenvectors_verified, out.status);
            Ok(Output { text: t, passed })
        }
    }
}

#[derive(Serialize)]
struct OracleOut {
    i: usize,
    dim: usize,
    pairs_checked: usize,
    mismatches: Vec<(String, String)>,
}

fn oracle_report(cfg: &Config, f: &FamilySpec, i: usize) -> Result<OracleOut> {
    let r = verify_oracle_equivalence(f, i, cfg.budget)?;
    let basis = f.basis(i)?;
    let mismatches = r
        .mismatches
        .iter()
        .map(|&(a, b)| (f.format_index(&basis[a]), f.format_index(&basis[b])))
        .collect();
    Ok(OracleOut { i, dim: r.dim, pairs_checked: r.pairs_checked, mismatches })
}

#[derive(Serialize)]
struct TableOut {
    family: String,
    i: usize,
    dim: usize,
    basis: Vec<String>,
    table: Vec<Vec<Option<String>>>,
    oracle: Option<OracleOut>,
}

pub fn table(cfg: &Config, kind: &FamilyKind, i: usize, verify: bool) -> Result<Output> {
    let f = family(cfg, kind)?;
    let dim = f.dim(i)?;
    let cells = (dim as u128) * (dim as u128);
    if cells > cfg.budget {
        return Err(Error::BudgetExceeded { needed: cells, budget: cfg.budget });
    }
    let labels: Vec<String> = f.basis(i)?.iter().map(|u| f.format_index(u)).collect();
    let table: Vec<Vec<Option<String>>> = f
        .product_table(i)?
        .into_iter()
        .map(|row| row.into_iter().map(|k| k.map(|k| labels[k].clone())).collect())
        .collect();
    let oracle = if verify { Some(oracle_report(cfg, &f, i)?) } else { None };
    let passed = oracle.as_ref().is_none_or(|o| o.mismatches.is_empty());
    let out = TableOut { family: kind.to_string(), i, dim, basis: labels, table, oracle };
    match cfg.format {
        Format::Json => json_output(&out, passed),
        Format::Csv => {
            let mut rows = vec![std::iter::once("*".to_string()).chain(out.basis.iter().cloned()).collect()];
            for (label, row) in out.basis.iter().zip(&out.table) {
                rows.push(
                    std::iter::once(label.clone())
                        .chain(row.iter().map(|c| c.clone().unwrap_or_else(|| "0".into())))
                        .collect(),
                );
            }
            csv_output(rows, passed)
        }
        Format::Text => {
            let name = |s: &str| format!("chi_{s}");
            let width = out.basis.iter().map(|l| name(l).len()).max().unwrap_or(1).max(1);
            let mut t = format!("{} V_{} (dim {})\n", out.family, i, dim);
            let _ = write!(t, "{:>width$} |", "*");
            for l in &out.basis {
                let _ = write!(t, " {:>width$}", name(l));
            }
            t.push('\n');
            for (l, row) in out.basis.iter().zip(&out.table) {
                let _ = write!(t, "{:>width$} |", name(l));
                for c in row {
                    let _ = write!(t, " {:>width$}", c.as_deref().map_or("0".to_string(), name));
                }
                t.push('\n');
            }
            if let Some(o) = &out.oracle {
                let _ = writeln!(t, "oracle: {} pairs checked, {} mismatches", o.pairs_checked, o.mismatches.len());
            }
            Ok(Output { text: t, passed })
        }
    }
}

#[derive(Serialize)]
struct NonassocRow {
    m: usize,
    catalan: u128,
    class_count: usize,
    mode: String,
    a000975: u128,
    matches: &'static str,
}

#[derive(Serialize)]
struct NonassocOut {
    family: String,
    i: usize,
    seed: u64,
    reports: Vec<NonassocRow>,
}

fn count(
    t: &MonomialTable,
    m: usize,
    mode: CountModeArg,
    cfg: &Config,
    attempts: usize,
) -> Result<SpectrumReport> {
    let basis = t.basis_vectors();
    let witness = || count_classes_witness(t, &basis, m, cfg.seed, attempts);
    match mode {
        CountModeArg::Exact => count_classes_exact(t, &basis, m, cfg.budget),
        CountModeArg::Witness => witness(),
        CountModeArg::Auto => match count_classes_exact(t, &basis, m, cfg.budget) {
            Err(Error::BudgetExceeded { .. }) => witness(),
            other => other,
        },
    }
}

pub fn nonassoc(
    cfg: &Config,
    kind: &FamilyKind,
    i: usize,
    max_m: usize,
    mode: CountModeArg,
    attempts: usize,
) -> Result<Output> {
    if max_m == 0 {
        return Err(Error::InvalidParameter("--max-m must be at least 1".into()));
    }
    let f = family(cfg, kind)?;
    let t = MonomialTable::from_family(&f, i)?;
    let mut reports = Vec::new();
    for m in 1..=max_m {
        let r = count(&t, m, mode, cfg, attempts)?;
        let a = a000975(m)?;
        let c = r.class_count as u128;
        let matches = if c == r.catalan {
            "catalan"
        } else if c == a {
            "a000975"
        } else if c == 1 {
            "one"
        } else {
            "other"
        };
        reports.push(NonassocRow { m, catalan: r.catalan, class_count: r.class_count, mode: r.mode.to_string(), a000975: a, matches });
    }
    let out = NonassocOut { family: kind.to_string(), i, seed: cfg.seed, reports };
    match cfg.format {
        Format::Json => json_output(&out, true),
        Format::Csv => {
            let mut rows = vec![["m", "catalan", "class_count", "mode", "a000975", "matches"].map(String::from).to_vec()];
            for r in &out.reports {
                rows.push(vec![
                    r.m.to_string(),
                    r.catalan.to_string(),
                    r.class_count.to_string(),
                    r.mode.clone(),
                    r.a000975.to_string(),
                    r.matches.to_string(),
                ]);
            }
            csv_output(rows, true)
        }
        Format::Text => {
            let mut t = format!("# seed: {}\n{} V_{}\n", out.seed, out.family, i);
            for r in &out.reports {
                let _ = writeln!(
                    t,
                    "m={:<2} classes={:<6} catalan={:<6} a000975={:<5} {} ({})",
                    r.m, r.class_count, r.catalan, r.a000975, r.matches, r.mode
                );
            }
            Ok(Output { text: t, passed: true })
        }
    }
}

#[derive(Serialize)]
struct IdempotentOut {
    support: Vec<usize>,
    scale: String,
    vector: Value,
    display: String,
}

#[derive(Serialize)]
struct IdempotentsOut {
    e: u32,
    count: usize,
    idempotents: Vec<IdempotentOut>,
    nilpotents: Vec<Value>,
    eta_relations: bool,
    primitivity: Option<bool>,
}

pub fn idempotents(cfg: &Config, e: u32) -> Result<Output> {
    no_csv(cfg, "idempotents")?;
    let f = make_family(FamilyKind::Hamming { n: 1, e })?;
    let list = classified_idempotents(e)?;
    let idempotents: Vec<IdempotentOut> = list
        .iter()
        .map(|x| {
            let ell = x.support.len() as i64;
            let scale = Rational::new((e as i64 - 2).into(), (e as i64 - 2 * ell).into());
            IdempotentOut {
                support: x.support.clone(),
                scale: scale.to_string(),
                vector: x.vector.to_json(&f),
                display: x.vector.display(&f),
            }
        })
        .collect();
    let nilpotents = nilpotents_order2_classified(e)?
        .iter()
        .map(|v| json!({ "vector": v.to_json(&f), "display": v.display(&f) }))
        .collect();
    let eta_relations = eta_relations_check(e)?;
    let primitivity = if e <= PRIMITIVITY_MAX_E { Some(primitivity_facts_check(e)?) } else { None };
    let passed = eta_relations && primitivity != Some(false);
    let out = IdempotentsOut { e, count: idempotents.len(), idempotents, nilpotents, eta_relations, primitivity };
    match cfg.format {
        Format::Text => {
            let mut t = format!("V_1(H(1,{e})): {} nonzero idempotents\n", out.count);
            for x in &out.idempotents {
                let _ = writeln!(t, "support {:?} scale {}: {}", x.support, x.scale, x.display);
            }
            let _ = writeln!(t, "nilpotents of order 2: {}", out.nilpotents.len());
            let _ = writeln!(t, "eta relations: {}", out.eta_relations);
            let _ = writeln!(t, "primitivity facts: {}", out.primitivity.map_or("skipped".into(), |b| b.to_string()));
            Ok(Output { text: t, passed })
        }
        _ => json_output(&out, passed),
    }
}

#[derive(Serialize)]
struct SampleOut {
    kind: &'static str,
    action: Value,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjugation: Option<bool>,
}

#[derive(Serialize)]
struct AutocheckOut {
    family: String,
    i: usize,
    seed: u64,
    samples: Vec<SampleOut>,
    kernel: Option<KernelOut>,
    status: &'static str,
}

#[derive(Serialize)]
struct KernelOut {
    enumerated: usize,
    kernel: Vec<HammingAuto>,
    expected: Option<Vec<HammingAuto>>,
    matches: Option<bool>,
}

impl From<KernelReport> for KernelOut {
    fn from(r: KernelReport) -> Self {
        let matches = r.matches();
        KernelOut { enumerated: r.enumerated, kernel: r.kernel, expected: r.expected, matches }
    }
}

fn random_type_d<R: Rng>(n: usize, rng: &mut R) -> SignedPermutation {
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let mut epsilon: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
    if epsilon.iter().filter(|&&s| s == -1).count() % 2 == 1 {
        epsilon[n - 1] = -epsilon[n - 1];
    }
    SignedPermutation::new(sigma, epsilon).expect("valid signed permutation")
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable action")
}

pub fn autocheck(cfg: &Config, kind: &FamilyKind, i: usize, samples: usize) -> Result<Output> {
    no_csv(cfg, "autocheck")?;
    let f = family(cfg, kind)?;
    let t = MonomialTable::from_family(&f, i)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let mut kernel = None;
    match *kind {
        FamilyKind::Hamming { .. } | FamilyKind::Hypercube { .. } => {
            let (n, e) = match *kind {
                FamilyKind::Hamming { n, e } => (n, e),
                FamilyKind::Hypercube { n } => (n, 2),
                _ => unreachable!(),
            };
            for _ in 0..samples {
                let phi = HammingAuto::random(n, e, &mut rng);
                let passed = is_table_automorphism(&phi.basis_map(&f, i)?, &t)?;
                out.push(SampleOut { kind: "hamming", action: to_value(&phi), passed, conjugation: None });
            }
            if e == 2 {
                for _ in 0..samples {
                    let mut sigma: Vec<usize> = (0..n).collect();
                    sigma.shuffle(&mut rng);
                    let epsilon = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
                    let g = SignedPermutation::new(sigma, epsilon)?;
                    let passed = is_table_automorphism(&g.basis_map(&f, i)?, &t)?;
                    out.push(SampleOut { kind: "signed-permutation", action: to_value(&g), passed, conjugation: None });
                }
            }
            if n <= KERNEL_MAX_N && e <= KERNEL_MAX_E {
                kernel = Some(KernelOut::from(kernel_check_hamming(&f, i)?));
            }
        }
        FamilyKind::HalvedCube { n } => {
            for _ in 0..samples {
                let g = random_type_d(n, &mut rng);
                let passed = is_table_automorphism(&g.basis_map(&f, i)?, &t)?;
                out.push(SampleOut { kind: "signed-permutation", action: to_value(&g), passed, conjugation: None });
            }
        }
        FamilyKind::Bilinear { q, d, e } => {
            for _ in 0..samples {
                let x: Vec<u32> = (0..d * e).map(|_| rng.gen_range(0..q)).collect();
                let a = random_invertible(d, q, &mut rng);
                let b = random_invertible(e, q, &mut rng);
                let alpha = BilinearAuto::new(q, d, e)?.translate(x.clone())?.left(a.clone())?.right(b.clone())?;
                let passed = is_table_automorphism(&alpha.basis_map(&f, i)?, &t)?;
                let conjugation = conjugation_identity_check(&f, &x, &a, &b)?;
                out.push(SampleOut {
                    kind: "bilinear",
                    action: json!({ "x": x, "a": a, "b": b }),
                    passed,
                    conjugation: Some(conjugation),
                });
            }
        }
        other => return Err(Error::Unsupported(format!("no constructed automorphism actions for {other}"))),
    }
    let passed = out.iter().all(|s| s.passed && s.conjugation != Some(false))
        && kernel.as_ref().is_none_or(|k| k.matches != Some(false));
    let report = AutocheckOut {
        family: kind.to_string(),
        i,
        seed: cfg.seed,
        samples: out,
        kernel,
        status: if passed { "OK" } else { "FAILED" },
    };
    match cfg.format {
        Format::Text => {
            let ok = report.samples.iter().filter(|s| s.passed).count();
            let mut t = format!("# seed: {}\n{} V_{}\n", report.seed, report.family, i);
            let _ = writeln!(t, "automorphisms: {ok}/{} sampled actions passed", report.samples.len());
            if let Some(k) = &report.kernel {
                let _ = writeln!(
                    t,
                    "kernel: {} of {} actions act trivially; prediction {}",
                    k.kernel.len(),
                    k.enumerated,
                    k.matches.map_or("n/a".into(), |b| if b { "matches".to_string() } else { "differs".into() })
                );
            }
            let _ = writeln!(t, "status: {}", report.status);
            Ok(Output { text: t, passed })
        }
        _ => json_output(&report, passed),
    }
}

#[derive(Serialize)]
struct OracleVerifyOut {
    family: String,
    spaces: Vec<OracleOut>,
    status: &'static str,
}

pub fn oracle_verify(cfg: &Config, kind: &FamilyKind, i: Option<usize>) -> Result<Output> {
    let f = family(cfg, kind)?;
    let spaces: Vec<usize> = match i {
        Some(i) => vec![i],
        None => (0..f.dims().len()).collect(),
    };
    let reports = spaces.into_iter().map(|i| oracle_report(cfg, &f, i)).collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.mismatches.is_empty());
    let out = OracleVerifyOut { family: kind.to_string(), spaces: reports, status: if passed { "OK" } else { "MISMATCH" } };
    match cfg.format {
        Format::Json => json_output(&out, passed),
        Format::Csv => {
            let mut rows = vec![["i", "dim", "pairs_checked", "mismatches"].map(String::from).to_vec()];
            for r in &out.spaces {
                rows.push(vec![r.i.to_string(), r.dim.to_string(), r.pairs_checked.to_string(), r.mismatches.len().to_string()]);
            }
            csv_output(rows, passed)
        }
        Format::Text => {
            let mut t = format!("{}\n", out.family);
            for r in &out.spaces {
                let _ = writeln!(t, "V_{}: dim {}, {} pairs, {} mismatches", r.i, r.dim, r.pairs_checked, r.mismatches.len());
            }
            let _ = writeln!(t, "status: {}", out.status);
            Ok(Output { text: t, passed })
        }
    }
}

#[derive(Serialize)]
struct IsoOut {
    kind: String,
    source: String,
    target: String,
    dim: usize,
    map: Vec<(String, String)>,
    isomorphic: bool,
}

fn subset_map(
    a: &FamilySpec,
    i: usize,
    b: &FamilySpec,
    j: usize,
    f: impl Fn(SubsetIndex) -> SubsetIndex,
) -> Result<Vec<usize>> {
    let nb = b.kind().subset_n().expect("subset family");
    a.basis(i)?
        .iter()
        .map(|u| {
            let t = f(SubsetIndex::from_word(u)).to_word(nb);
            b.position(j, &b.canonical(&t))
                .ok_or_else(|| Error::InvalidParameter(format!("{} has no image in V_{j}", a.format_index(u))))
        })
        .collect()
}

pub fn isocheck(cfg: &Config, kind: IsoKind, n: Option<usize>, i: Option<usize>) -> Result<Output> {
    no_csv(cfg, "isocheck")?;
    let fam = |k: FamilyKind| family(cfg, &k);
    let (source, target, a, b, map) = match kind {
        IsoKind::FoldedQ4 => {
            let (x, y) = (fam(FamilyKind::FoldedCube { n: 4 })?, fam(FamilyKind::Hypercube { n: 4 })?);
            let map = subset_map(&x, 1, &y, 2, |s| s)?;
            ("V_1(folded Q_4)".to_string(), "V_2(Q_4)".to_string(), MonomialTable::from_family(&x, 1)?, MonomialTable::from_family(&y, 2)?, map)
        }
        IsoKind::HalvedQ4 => {
            let (x, y) = (fam(FamilyKind::HalvedCube { n: 4 })?, fam(FamilyKind::Hypercube { n: 3 })?);
            let map = subset_map(&x, 2, &y, 2, |s| if s.contains(4) { s.complement(4) } else { s })?;
            ("V_2(halved Q_4)".into(), "V_2(Q_3)".into(), MonomialTable::from_family(&x, 2)?, MonomialTable::from_family(&y, 2)?, map)
        }
        IsoKind::HalvedCube => {
            let (n, i) = match (n, i) {
                (Some(n), Some(i)) => (n, i),
                _ => return Err(Error::InvalidParameter("--n and --i are required for halved-cube".into())),
            };
            let (x, y) = (fam(FamilyKind::HalvedCube { n })?, fam(FamilyKind::Hypercube { n })?);
            let map = subset_map(&x, i, &y, i, |s| s)?;
            (format!("V_{i}(halved Q_{n})"), format!("V_{i}(Q_{n})"), MonomialTable::from_family(&x, i)?, MonomialTable::from_family(&y, i)?, map)
        }
        IsoKind::FoldedHalfQ8 => {
            let (x, y) = (fam(FamilyKind::FoldedHalfCube { n: 8 })?, fam(FamilyKind::HalvedCube { n: 8 })?);
            let map = subset_map(&x, 1, &y, 2, |s| s)?;
            ("V_1(folded halved Q_8)".into(), "V_2(halved Q_8)".into(), MonomialTable::from_family(&x, 1)?, MonomialTable::from_family(&y, 2)?, map)
        }
        IsoKind::PairingH23 => {
            let x = fam(FamilyKind::Hamming { n: 2, e: 3 })?;
            let h13 = MonomialTable::from_family(&fam(FamilyKind::Hamming { n: 1, e: 3 })?, 1)?;
            let y = MonomialTable::direct_product(&[h13.clone(), h13])?;
            let map = x
                .basis(2)?
                .iter()
                .map(|u| match x.format_index(u).as_str() {
                    "11" => 0,
                    "22" => 1,
                    "12" => 2,
                    _ => 3,
                })
                .collect();
            ("V_2(H(2,3))".into(), "V_1(H(1,3)) x V_1(H(1,3))".into(), MonomialTable::from_family(&x, 2)?, y, map)
        }
    };
    if a.dim() != b.dim() {
        return Err(Error::InvalidParameter(format!("dimensions differ: {} vs {}", a.dim(), b.dim())));
    }
    let isomorphic = verify_isomorphism(&map, &a, &b)?;
    let pairs = map.iter().enumerate().map(|(k, &t)| (a.label(k).to_string(), b.label(t).to_string())).collect();
    let kind_name = format!("{kind:?}");
    let out = IsoOut { kind: kind_name, source, target, dim: a.dim(), map: pairs, isomorphic };
    match cfg.format {
        Format::Text => {
            let mut t = format!("{} -> {} (dim {})\n", out.source, out.target, out.dim);
            for (x, y) in &out.map {
                let _ = writeln!(t, "  chi_{x} -> chi_{y}");
            }
            let _ = writeln!(t, "isomorphic: {}", out.isomorphic);
            Ok(Output { text: t, passed: isomorphic })
        }
        _ => json_output(&out, isomorphic),
    }
}
