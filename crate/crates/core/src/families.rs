//! The six graph families, their eigenspace bases and closed-form Norton products.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::fq::rank_fq;
use crate::groups::{is_prime, CharIndex, Group, GroupElement, DEFAULT_ENUMERATION_BUDGET};

/// Default cap on `|X|` for anything that materializes vertex tables.
pub const ORACLE_VERTEX_BUDGET: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyKind {
    Hamming { n: usize, e: u32 },
    Hypercube { n: usize },
    HalvedCube { n: usize },
    FoldedCube { n: usize },
    FoldedHalfCube { n: usize },
    Bilinear { q: u32, d: usize, e: usize },
}

impl FamilyKind {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::Hamming { .. } => "hamming",
            FamilyKind::Hypercube { .. } => "hypercube",
            FamilyKind::HalvedCube { .. } => "halved-cube",
            FamilyKind::FoldedCube { .. } => "folded-cube",
            FamilyKind::FoldedHalfCube { .. } => "folded-half-cube",
            FamilyKind::Bilinear { .. } => "bilinear",
        }
    }

    /// `n` for the cube families, which index characters by subsets of `[n]`.
    pub fn subset_n(&self) -> Option<usize> {
        match *self {
            FamilyKind::Hypercube { n }
            | FamilyKind::HalvedCube { n }
            | FamilyKind::FoldedCube { n }
            | FamilyKind::FoldedHalfCube { n } => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyKind::Hamming { n, e } => write!(f, "H({n},{e})"),
            FamilyKind::Hypercube { n } => write!(f, "Q_{n}"),
            FamilyKind::HalvedCube { n } => write!(f, "halved Q_{n}"),
            FamilyKind::FoldedCube { n } => write!(f, "folded Q_{n}"),
            FamilyKind::FoldedHalfCube { n } => write!(f, "folded halved Q_{n}"),
            FamilyKind::Bilinear { q, d, e } => write!(f, "H_{q}({d},{e})"),
        }
    }
}

/// A subset of `[n]` as a bitmask; bit `j` stands for element `j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetIndex(pub u64);

impl SubsetIndex {
    /// From 1-based elements.
    pub fn from_elements(elements: &[usize]) -> Self {
        SubsetIndex(elements.iter().fold(0, |acc, &j| acc | 1 << (j - 1)))
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..64).filter(|j| self.0 >> j & 1 == 1).map(|j| j + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0 >> (j - 1) & 1 == 1
    }

    pub fn complement(&self, n: usize) -> Self {
        SubsetIndex(!self.0 & full_mask(n))
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        SubsetIndex(self.0 ^ other.0)
    }

    pub fn to_word(&self, n: usize) -> GroupElement {
        GroupElement::new((0..n).map(|j| (self.0 >> j & 1) as u32).collect())
    }

    pub fn from_word(w: &GroupElement) -> Self {
        SubsetIndex(
            w.entries()
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &x)| if x % 2 == 1 { acc | 1 << j } else { acc }),
        )
    }

    /// `13` style for `n ≤ 9`, otherwise `{1,10}`.
    pub fn format(&self, n: usize) -> String {
        let els = self.elements();
        if els.is_empty() {
            "{}".into()
        } else if n <= 9 {
            els.iter().map(|j| j.to_string()).collect()
        } else {
            let parts: Vec<String> = els.iter().map(|j| j.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        }
    }

    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        let els: Vec<usize> = if t.is_empty() {
            vec![]
        } else if t.contains(',') {
            t.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad subset {s:?}"))))
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad subset {s:?}"))))
                .collect::<Result<_>>()?
        };
        if els.iter().any(|&j| j == 0 || j > n) {
            return Err(Error::Parse(format!("subset {s:?} is not inside [{n}]")));
        }
        Ok(Self::from_elements(&els))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A family instance: vertex group, connection set, and per-eigenspace bases.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    kind: FamilyKind,
    group: Group,
    diameter: usize,
    bases: Vec<Vec<CharIndex>>,
    lookup: HashMap<CharIndex, (usize, usize)>,
}

pub fn make_family(kind: FamilyKind) -> Result<FamilySpec> {
    FamilySpec::new(kind, DEFAULT_ENUMERATION_BUDGET)
}

impl FamilySpec {
    /// Builds the instance; `budget` caps the number of characters (= `|X|`).
    pub fn new(kind: FamilyKind, budget: u128) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let (group, diameter) = match kind {
            FamilyKind::Hamming { n, e } => (Group::word(n, e)?, n),
            FamilyKind::Hypercube { n } => {
                if n == 0 {
                    return bad("hypercube needs n >= 1".into());
                }
                (Group::word(n, 2)?, n)
            }
            FamilyKind::HalvedCube { n } => {
                if n < 2 {
                    return bad("halved cube needs n >= 2".into());
                }
                (Group::word(n, 2)?, n / 2)
            }
            FamilyKind::FoldedCube { n } => {
                if n < 3 {
                    return bad("folded cube needs n >= 3".into());
                }
                (Group::word(n, 2)?, n / 2)
            }
            FamilyKind::FoldedHalfCube { n } => {
                if n < 6 || n % 2 == 1 {
                    return bad("folded half-cube needs even n >= 6".into());
                }
                (Group::word(n, 2)?, n / 4)
            }
            FamilyKind::Bilinear { q, d, e } => {
                if !is_prime(q) {
                    return bad(format!("bilinear forms graph needs prime q, got {q}"));
                }
                if d == 0 || d > e {
                    return bad(format!("bilinear forms graph needs 1 <= d <= e, got d={d}, e={e}"));
                }
                (Group::matrix(d, e, q)?, d)
            }
        };
        if kind.subset_n().is_some_and(|n| n > 20) {
            return bad("cube families are limited to n <= 20".into());
        }
        let all = group.enumerate(budget)?;
        let mut spec = FamilySpec {
            kind,
            group,
            diameter,
            bases: vec![Vec::new(); diameter + 1],
            lookup: HashMap::new(),
        };
        for u in all {
            if spec.canonical(&u) == u {
                let i = spec.space_of_canonical(&u);
                spec.bases[i].push(u);
            }
        }
        if kind.subset_n().is_some() {
            for b in spec.bases.iter_mut() {
                b.sort_by_key(|w| SubsetIndex::from_word(w).elements());
            }
        }
        for (i, b) in spec.bases.iter().enumerate() {
            for (k, u) in b.iter().enumerate() {
                spec.lookup.insert(u.clone(), (i, k));
            }
        }
        Ok(spec)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Order of the cyclotomic field the characters take values in.
    pub fn order(&self) -> u32 {
        self.group.modulus()
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    fn n(&self) -> usize {
        self.group.rank()
    }

    fn rank_of(&self, u: &GroupElement) -> usize {
        match self.group {
            Group::Matrix { rows, cols, q } => rank_fq(rows, cols, u.entries(), q).expect("prime q"),
            Group::Word { .. } => u.weight(),
        }
    }

    pub fn is_vertex(&self, x: &GroupElement) -> bool {
        if !self.group.contains(x) {
            return false;
        }
        let last_zero = || x.entries().last() == Some(&0);
        match self.kind {
            FamilyKind::HalvedCube { .. } => x.weight().is_multiple_of(2),
            FamilyKind::FoldedCube { .. } => last_zero(),
            FamilyKind::FoldedHalfCube { .. } => x.weight().is_multiple_of(2) && last_zero(),
            _ => true,
        }
    }

    pub fn vertex_count(&self) -> u128 {
        let full = self.group.order().unwrap_or(u128::MAX);
        match self.kind {
            FamilyKind::HalvedCube { .. } | FamilyKind::FoldedCube { .. } => full / 2,
            FamilyKind::FoldedHalfCube { .. } => full / 4,
            _ => full,
        }
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self, budget: u128) -> Result<Vec<GroupElement>> {
        let needed = self.vertex_count();
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let all = self.group.enumerate(u128::MAX)?;
        Ok(all.into_iter().filter(|x| self.is_vertex(x)).collect())
    }

    pub fn connection(&self, budget: u128) -> Result<Vec<GroupElement>> {
        let n = self.n();
        let keep = |x: &GroupElement| -> bool {
            let w = self.rank_of(x);
            match self.kind {
                FamilyKind::Hamming { .. } | FamilyKind::Hypercube { .. } | FamilyKind::Bilinear { .. } => w == 1,
                FamilyKind::HalvedCube { .. } => w == 2,
                FamilyKind::FoldedCube { .. } => w == 1 || w == n - 1,
                FamilyKind::FoldedHalfCube { .. } => w == 2 || w == n - 2,
            }
        };
        Ok(self.vertices(budget)?.into_iter().filter(|x| keep(x)).collect())
    }

    pub fn cayley_graph(&self, budget: u128) -> Result<CayleyGraph> {
        let vertices = self.vertices(budget)?;
        let connection = self.connection(budget)?;
        let characters = self.bases.iter().flatten().cloned().collect();
        CayleyGraph::new(self.group, vertices, characters, connection)
    }

    /// The canonical index of the character `χ_u` restricted to the vertex set.
    pub fn canonical(&self, u: &CharIndex) -> CharIndex {
        let n = self.n();
        let s = SubsetIndex::from_word(u);
        let halve = |s: SubsetIndex| -> SubsetIndex {
            let c = s.complement(n);
            match (2 * s.len()).cmp(&n) {
                std::cmp::Ordering::Less => s,
                std::cmp::Ordering::Greater => c,
                std::cmp::Ordering::Equal => {
                    if s.contains(1) {
                        s
                    } else {
                        c
                    }
                }
            }
        };
        let fold = |s: SubsetIndex| -> SubsetIndex {
            if s.len().is_multiple_of(2) {
                s
            } else {
                s.symmetric_difference(&SubsetIndex(1 << (n - 1)))
            }
        };
        match self.kind {
            FamilyKind::Hamming { .. } | FamilyKind::Hypercube { .. } | FamilyKind::Bilinear { .. } => u.clone(),
            FamilyKind::HalvedCube { .. } => halve(s).to_word(n),
            FamilyKind::FoldedCube { .. } => fold(s).to_word(n),
            FamilyKind::FoldedHalfCube { .. } => halve(fold(s)).to_word(n),
        }
    }

    fn space_of_canonical(&self, u: &CharIndex) -> usize {
        match self.kind {
            FamilyKind::FoldedCube { .. } | FamilyKind::FoldedHalfCube { .. } => u.weight() / 2,
            _ => self.rank_of(u),
        }
    }

    /// `(i, position)` of a character index, after canonicalization.
    pub fn locate(&self, u: &CharIndex) -> Option<(usize, usize)> {
        if !self.group.contains(u) {
            return None;
        }
        self.lookup.get(&self.canonical(u)).copied()
    }

    pub fn check_space(&self, i: usize) -> Result<()> {
        if i > self.diameter {
            Err(Error::OutOfRange(format!("eigenspace {i} > diameter {}", self.diameter)))
        } else {
            Ok(())
        }
    }

    pub fn basis(&self, i: usize) -> Result<&[CharIndex]> {
        self.check_space(i)?;
        Ok(&self.bases[i])
    }

    pub fn dim(&self, i: usize) -> Result<usize> {
        Ok(self.basis(i)?.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Position of `u` in the `V_i` basis, if it is a basis index there.
    pub fn position(&self, i: usize, u: &CharIndex) -> Option<usize> {
        match self.locate(u) {
            Some((j, k)) if j == i => Some(k),
            _ => None,
        }
    }

    /// Display form of a basis index: subsets for the cube families.
    pub fn format_index(&self, u: &CharIndex) -> String {
        match self.kind.subset_n() {
            Some(n) => SubsetIndex::from_word(u).format(n),
            None => self.group.format(u),
        }
    }

    pub fn index_json(&self, u: &CharIndex) -> serde_json::Value {
        match self.kind.subset_n() {
            Some(n) => serde_json::Value::String(SubsetIndex::from_word(u).format(n)),
            None => self.group.to_json(u),
        }
    }

    /// Parses a basis index in the family's display form.
    pub fn parse_index(&self, s: &str) -> Result<CharIndex> {
        match self.kind.subset_n() {
            Some(n) => Ok(SubsetIndex::parse(s, n)?.to_word(n)),
            None => self.group.parse(s),
        }
    }

    pub fn predicted_eigenvalue(&self, i: usize) -> Result<i64> {
        self.check_space(i)?;
        let i = i as i64;
        Ok(match self.kind {
            FamilyKind::Hamming { n, e } => (n as i64 - i) * e as i64 - n as i64,
            FamilyKind::Hypercube { n } => n as i64 - 2 * i,
            FamilyKind::HalvedCube { n } => {
                let n = n as i64;
                ((n - 2 * i).pow(2) - n) / 2
            }
            FamilyKind::FoldedCube { n } => n as i64 - 4 * i,
            FamilyKind::FoldedHalfCube { n } => {
                let n = n as i64;
                ((n - 4 * i).pow(2) - n) / 2
            }
            FamilyKind::Bilinear { q, d, e } => {
                let q = q as i64;
                let p = |k: i64| q.pow(k as u32);
                (p(d as i64 + e as i64 - i) - p(d as i64) - p(e as i64) + 1) / (q - 1)
            }
        })
    }

    pub fn predicted_dimension(&self, i: usize) -> Result<u128> {
        self.check_space(i)?;
        Ok(match self.kind {
            FamilyKind::Hamming { n, e } => binom(n, i) * (e as u128 - 1).pow(i as u32),
            FamilyKind::Hypercube { n } => binom(n, i),
            FamilyKind::HalvedCube { n } => {
                if 2 * i == n {
                    binom(n, i) / 2
                } else {
                    binom(n, i)
                }
            }
            FamilyKind::FoldedCube { n } => binom(n, 2 * i),
            FamilyKind::FoldedHalfCube { n } => {
                if 4 * i == n {
                    binom(n, 2 * i) / 2
                } else {
                    binom(n, 2 * i)
                }
            }
            FamilyKind::Bilinear { q, d, e } => {
                let q = q as u128;
                let mut count = qbinom(d, i, q as u32)?;
                for k in 0..i {
                    count *= q.pow(e as u32) - q.pow(k as u32);
                }
                count
            }
        })
    }

    fn closed_product_index(&self, i: usize, u: &CharIndex, v: &CharIndex) -> Option<usize> {
        let n = self.n();
        let sum = self.group.add(u, v).expect("basis indices lie in the group");
        let hit = match self.kind {
            FamilyKind::Hamming { .. } => sum.weight() == i,
            FamilyKind::Bilinear { .. } => self.rank_of(&sum) == i,
            FamilyKind::Hypercube { .. } => sum.weight() == i,
            FamilyKind::HalvedCube { .. } => sum.weight() == i || sum.weight() == n - i,
            FamilyKind::FoldedCube { .. } => sum.weight() == 2 * i,
            FamilyKind::FoldedHalfCube { .. } => sum.weight() == 2 * i || sum.weight() == n - 2 * i,
        };
        if !hit {
            return None;
        }
        let k = self.position(i, &sum);
        debug_assert!(k.is_some(), "product rule lands in the basis");
        k
    }

    /// `χ_a ⋆ χ_b` for basis positions `a`, `b` of `V_i`: the position of the
    /// product (with coefficient 1), or `None` for zero.
    pub fn closed_product(&self, i: usize, a: usize, b: usize) -> Result<Option<usize>> {
        let basis = self.basis(i)?;
        let get = |k: usize| {
            basis.get(k).ok_or_else(|| Error::OutOfRange(format!("basis position {k} in V_{i}")))
        };
        let (u, v) = (get(a)?, get(b)?);
        Ok(self.closed_product_index(i, u, v))
    }

    /// [`closed_product`](Self::closed_product) keyed by character indices.
    pub fn closed_product_of(&self, i: usize, u: &CharIndex, v: &CharIndex) -> Result<Option<CharIndex>> {
        let a = self
            .position(i, u)
            .ok_or_else(|| Error::SpaceMismatch(format!("{} is not in the V_{i} basis", self.format_index(u))))?;
        let b = self
            .position(i, v)
            .ok_or_else(|| Error::SpaceMismatch(format!("{} is not in the V_{i} basis", self.format_index(v))))?;
        Ok(self.closed_product(i, a, b)?.map(|k| self.bases[i][k].clone()))
    }

    /// Full `dim × dim` table of closed products.
    pub fn product_table(&self, i: usize) -> Result<Vec<Vec<Option<usize>>>> {
        let d = self.dim(i)?;
        (0..d)
            .map(|a| (0..d).map(|b| self.closed_product(i, a, b)).collect())
            .collect()
    }
}

pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// Gaussian binomial `[d choose i]_q`.
pub fn qbinom(d: usize, i: usize, q: u32) -> Result<u128> {
    if i > d {
        return Err(Error::OutOfRange(format!("q-binomial needs i <= d, got i={i}, d={d}")));
    }
    let q = q as u128;
    let overflow = || Error::InvalidParameter("q-binomial overflow".into());
    let mut num = 1u128;
    let mut den = 1u128;
    for k in 0..i {
        let a = q.checked_pow((d - k) as u32).ok_or_else(overflow)? - 1;
        let b = q.checked_pow((k + 1) as u32).ok_or_else(overflow)? - 1;
        num = num.checked_mul(a).ok_or_else(overflow)?;
        den = den.checked_mul(b).ok_or_else(overflow)?;
    }
    Ok(num / den)
}

/// Whether some `i`-subsets `S, T ⊆ [n]` have `|S△T| = j`.
pub fn symmetric_difference_feasible(n: usize, i: usize, j: usize) -> bool {
    i <= n && j.is_multiple_of(2) && j <= (2 * i).min(2 * (n - i))
}

/// Every instance covered by the spectrum and oracle checks.
pub fn shipped_instances() -> Vec<FamilyKind> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for e in 2..=5 {
            out.push(FamilyKind::Hamming { n, e });
        }
    }
    for n in 1..=8 {
        out.push(FamilyKind::Hypercube { n });
    }
    for n in 2..=8 {
        out.push(FamilyKind::HalvedCube { n });
    }
    for n in 3..=8 {
        out.push(FamilyKind::FoldedCube { n });
    }
    for n in [6, 8] {
        out.push(FamilyKind::FoldedHalfCube { n });
    }
    for q in [2, 3] {
        out.push(FamilyKind::Bilinear { q, d: 2, e: 2 });
    }
    out
}
