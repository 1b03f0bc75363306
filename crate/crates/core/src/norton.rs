//! Norton algebras on eigenspaces: vectors, the closed-form and projection
//! products, idempotents, identity detection and isomorphism checks.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;
use serde_json::json;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::families::{make_family, FamilyKind, FamilySpec, ORACLE_VERTEX_BUDGET};
use crate::groups::GroupElement;
use crate::linalg;

/// Largest `dim V_i` accepted by [`find_identity`].
pub const IDENTITY_DIM_BUDGET: usize = 256;
/// Largest `e` accepted by [`primitivity_facts_check`].
pub const PRIMITIVITY_MAX_E: u32 = 7;

/// A vector `Σ c_k χ_k` of one eigenspace, keyed by basis position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraVector {
    space: usize,
    dim: usize,
    order: u32,
    coeffs: BTreeMap<usize, Cyclotomic>,
}

impl AlgebraVector {
    pub fn zero(space: usize, dim: usize, order: u32) -> Self {
        AlgebraVector { space, dim, order, coeffs: BTreeMap::new() }
    }

    pub fn zero_in(f: &FamilySpec, i: usize) -> Result<Self> {
        Ok(Self::zero(i, f.dim(i)?, f.order()))
    }

    /// The basis vector `χ` at position `pos` of `V_i`.
    pub fn basis(f: &FamilySpec, i: usize, pos: usize) -> Result<Self> {
        let mut v = Self::zero_in(f, i)?;
        v.set(pos, Cyclotomic::one(f.order()))?;
        Ok(v)
    }

    /// `Σ c χ_u` for character indices given in the family's display form.
    pub fn from_named(f: &FamilySpec, i: usize, terms: &[(&str, Cyclotomic)]) -> Result<Self> {
        let mut v = Self::zero_in(f, i)?;
        for (name, c) in terms {
            let u = f.parse_index(name)?;
            let pos = f
                .position(i, &u)
                .ok_or_else(|| Error::SpaceMismatch(format!("{name} is not in the V_{i} basis")))?;
            v.accumulate(pos, c)?;
        }
        Ok(v)
    }

    pub fn from_terms(
        space: usize,
        dim: usize,
        order: u32,
        terms: impl IntoIterator<Item = (usize, Cyclotomic)>,
    ) -> Result<Self> {
        let mut v = Self::zero(space, dim, order);
        for (pos, c) in terms {
            v.accumulate(pos, &c)?;
        }
        Ok(v)
    }

    pub fn space(&self) -> usize {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, pos: usize) -> Cyclotomic {
        self.coeffs.get(&pos).cloned().unwrap_or_else(|| Cyclotomic::zero(self.order))
    }

    /// Nonzero terms in increasing basis position.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Cyclotomic)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    fn check_pos(&self, pos: usize, c: &Cyclotomic) -> Result<()> {
        if pos >= self.dim {
            return Err(Error::OutOfRange(format!("basis position {pos} >= dim {}", self.dim)));
        }
        if c.order() != self.order {
            return Err(Error::OrderMismatch { left: self.order, right: c.order() });
        }
        Ok(())
    }

    pub fn set(&mut self, pos: usize, c: Cyclotomic) -> Result<()> {
        self.check_pos(pos, &c)?;
        if c.is_zero() {
            self.coeffs.remove(&pos);
        } else {
            self.coeffs.insert(pos, c);
        }
        Ok(())
    }

    /// Adds `c` to the coefficient at `pos`.
    pub fn accumulate(&mut self, pos: usize, c: &Cyclotomic) -> Result<()> {
        self.check_pos(pos, c)?;
        let sum = match self.coeffs.get(&pos) {
            Some(old) => old + c,
            None => c.clone(),
        };
        self.set(pos, sum)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if (self.space, self.dim, self.order) == (other.space, other.dim, other.order) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "V_{} (dim {}, e={}) vs V_{} (dim {}, e={})",
                self.space, self.dim, self.order, other.space, other.dim, other.order
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k, c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero(self.space, self.dim, self.order);
        if !c.is_zero() {
            for (k, x) in self.terms() {
                out.coeffs.insert(k, x * c);
            }
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Cyclotomic::from_rational(self.order, r))
    }

    /// `{"i": …, "terms": [{"index": …, "coeff": …}]}` with family index names.
    pub fn to_json(&self, f: &FamilySpec) -> serde_json::Value {
        let basis = f.basis(self.space).unwrap_or(&[]);
        let terms: Vec<_> = self
            .terms()
            .map(|(k, c)| {
                let index = basis.get(k).map(|u| f.index_json(u)).unwrap_or(json!(k));
                json!({ "index": index, "coeff": c })
            })
            .collect();
        json!({ "i": self.space, "terms": terms })
    }

    /// Human-readable form using the family's index names.
    pub fn display(&self, f: &FamilySpec) -> String {
        let basis = f.basis(self.space).unwrap_or(&[]);
        let name = |k: usize| basis.get(k).map(|u| f.format_index(u)).unwrap_or_else(|| k.to_string());
        self.render(name)
    }

    fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, c)| if c.is_one() { format!("χ_{}", name(k)) } else { format!("({c})χ_{}", name(k)) })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V_{}[{}]", self.space, self.render(|k| format!("#{k}")))
    }
}

impl<'a> Add<&'a AlgebraVector> for &'a AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &'a AlgebraVector) -> AlgebraVector {
        self.checked_add(rhs).expect("vectors of the same space")
    }
}

impl<'a> Sub<&'a AlgebraVector> for &'a AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &'a AlgebraVector) -> AlgebraVector {
        self.checked_sub(rhs).expect("vectors of the same space")
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        self.scale(&Cyclotomic::from_integer(self.order, -1))
    }
}

/// Bilinear extension of [`FamilySpec::closed_product`]. Never touches vertices.
pub fn closed_form_product(f: &FamilySpec, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
    v.check_same_space(w)?;
    let i = v.space;
    if f.dim(i)? != v.dim || f.order() != v.order {
        return Err(Error::SpaceMismatch(format!("vector does not belong to V_{i} of {}", f.kind())));
    }
    let mut out = AlgebraVector::zero(i, v.dim, v.order);
    for (a, ca) in v.terms() {
        for (b, cb) in w.terms() {
            if let Some(k) = f.closed_product(i, a, b)? {
                out.accumulate(k, &(ca * cb))?;
            }
        }
    }
    Ok(out)
}

/// Structure constants of an algebra whose basis products are a basis
/// element or zero. Every family eigenspace has this shape.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    space: usize,
    dim: usize,
    order: u32,
    table: Vec<Option<u32>>,
    labels: Vec<String>,
}

impl MonomialTable {
    pub fn from_family(f: &FamilySpec, i: usize) -> Result<Self> {
        let basis = f.basis(i)?;
        let dim = basis.len();
        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                table.push(f.closed_product(i, a, b)?.map(|k| k as u32));
            }
        }
        let labels = basis.iter().map(|u| f.format_index(u)).collect();
        Ok(MonomialTable { space: i, dim, order: f.order(), table, labels })
    }

    /// The algebra `A_1 × ⋯ × A_k`, with bases concatenated in order.
    pub fn direct_product(parts: &[MonomialTable]) -> Result<Self> {
        let order = parts.first().map_or(1, |p| p.order);
        if let Some(p) = parts.iter().find(|p| p.order != order) {
            return Err(Error::OrderMismatch { left: order, right: p.order });
        }
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut table = vec![None; dim * dim];
        let mut labels = Vec::with_capacity(dim);
        let mut offset = 0;
        for (k, p) in parts.iter().enumerate() {
            for a in 0..p.dim {
                for b in 0..p.dim {
                    table[(offset + a) * dim + offset + b] = p.get(a, b).map(|c| (c + offset) as u32);
                }
                labels.push(format!("{k}:{}", p.labels[a]));
            }
            offset += p.dim;
        }
        Ok(MonomialTable { space: 0, dim, order, table, labels })
    }

    pub fn space(&self) -> usize {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Position of `χ_a ⋆ χ_b`, or `None` for zero.
    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a * self.dim + b].map(|k| k as usize)
    }

    pub fn is_zero_product(&self) -> bool {
        self.table.iter().all(Option::is_none)
    }

    pub fn basis_vector(&self, pos: usize) -> AlgebraVector {
        let mut v = self.zero();
        v.set(pos, Cyclotomic::one(self.order)).expect("position within the basis");
        v
    }

    pub fn basis_vectors(&self) -> Vec<AlgebraVector> {
        (0..self.dim).map(|k| self.basis_vector(k)).collect()
    }

    pub fn zero(&self) -> AlgebraVector {
        AlgebraVector::zero(self.space, self.dim, self.order)
    }

    fn check_vector(&self, v: &AlgebraVector) -> Result<()> {
        if (v.space, v.dim, v.order) == (self.space, self.dim, self.order) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("vector of V_{} (dim {}) used with V_{} (dim {})", v.space, v.dim, self.space, self.dim)))
        }
    }

    pub fn product(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        let mut out = self.zero();
        for (a, ca) in v.terms() {
            for (b, cb) in w.terms() {
                if let Some(k) = self.get(a, b) {
                    out.accumulate(k, &(ca * cb))?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_idempotent(&self, v: &AlgebraVector) -> Result<bool> {
        Ok(!v.is_zero() && &self.product(v, v)? == v)
    }
}

/// The projection oracle: multiplies value tables over the vertex set
/// entrywise and projects back onto `V_i` by inner products with the basis
/// characters. Independent of every closed-form product rule.
#[derive(Clone, Debug)]
pub struct ProjectionOracle {
    space: usize,
    dim: usize,
    order: u32,
    vertices: usize,
    /// `exps[k][x]`: exponent of `χ_k(x) = ω^exps[k][x]` for basis position `k`.
    exps: Vec<Vec<u32>>,
}

impl ProjectionOracle {
    pub fn new(f: &FamilySpec, i: usize, budget: u128) -> Result<Self> {
        let basis = f.basis(i)?;
        let vertices = f.vertices(budget)?;
        let group = f.group();
        let exps = basis
            .iter()
            .map(|u| vertices.iter().map(|x| group.pairing(u, x)).collect())
            .collect();
        Ok(ProjectionOracle { space: i, dim: basis.len(), order: f.order(), vertices: vertices.len(), exps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_vector(&self, v: &AlgebraVector) -> Result<()> {
        if (v.space, v.dim, v.order) == (self.space, self.dim, self.order) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("vector does not belong to V_{}", self.space)))
        }
    }

    /// `v` as a function on the vertex set.
    pub fn value_table(&self, v: &AlgebraVector) -> Result<Vec<Cyclotomic>> {
        self.check_vector(v)?;
        let e = self.order;
        let roots: Vec<Cyclotomic> = (0..e as i64).map(|k| Cyclotomic::root_power(e, k)).collect();
        let mut table = vec![Cyclotomic::zero(e); self.vertices];
        for (k, c) in v.terms() {
            let scaled: Vec<Cyclotomic> = roots.iter().map(|r| r * c).collect();
            for (x, slot) in table.iter_mut().enumerate() {
                *slot = &*slot + &scaled[self.exps[k][x] as usize];
            }
        }
        Ok(table)
    }

    /// `Σ_k ⟨table, χ_k⟩ χ_k` over the `V_i` basis.
    pub fn project(&self, table: &[Cyclotomic]) -> Result<AlgebraVector> {
        if table.len() != self.vertices {
            return Err(Error::LengthMismatch { expected: self.vertices, found: table.len() });
        }
        let e = self.order;
        let scale = Rational::new(1.into(), self.vertices.into());
        let mut out = AlgebraVector::zero(self.space, self.dim, e);
        for (k, row) in self.exps.iter().enumerate() {
            let mut buckets = vec![Cyclotomic::zero(e); e as usize];
            for (x, value) in table.iter().enumerate() {
                let b = &mut buckets[row[x] as usize];
                *b = &*b + value;
            }
            let mut acc = Cyclotomic::zero(e);
            for (j, b) in buckets.iter().enumerate() {
                if !b.is_zero() {
                    acc = &acc + &(b * &Cyclotomic::root_power(e, -(j as i64)));
                }
            }
            out.set(k, acc.scale(&scale))?;
        }
        Ok(out)
    }

    pub fn product(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
        let tv = self.value_table(v)?;
        let tw = self.value_table(w)?;
        let prod: Vec<Cyclotomic> = tv.iter().zip(&tw).map(|(a, b)| a * b).collect();
        self.project(&prod)
    }

    /// The product of two basis characters, working with exponent tables only.
    pub fn basis_product(&self, a: usize, b: usize) -> AlgebraVector {
        let e = self.order;
        let (ra, rb) = (&self.exps[a], &self.exps[b]);
        let prod: Vec<u32> = ra
            .iter()
            .zip(rb)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= e {
                    s - e
                } else {
                    s
                }
            })
            .collect();
        let scale = Rational::new(1.into(), self.vertices.into());
        let mut out = AlgebraVector::zero(self.space, self.dim, e);
        let mut hist = vec![0i64; e as usize];
        for (k, row) in self.exps.iter().enumerate() {
            hist.iter_mut().for_each(|h| *h = 0);
            for (&p, &r) in prod.iter().zip(row) {
                let d = p + e - r;
                hist[(if d >= e { d - e } else { d }) as usize] += 1;
            }
            if hist.iter().all(|&h| h == hist[0]) {
                continue;
            }
            let c = Cyclotomic::from_power_counts(e, &hist).scale(&scale);
            out.set(k, c).expect("valid position");
        }
        out
    }
}

/// Projection-oracle product with the default vertex budget.
pub fn oracle_product(f: &FamilySpec, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
    v.check_same_space(w)?;
    ProjectionOracle::new(f, v.space, ORACLE_VERTEX_BUDGET)?.product(v, w)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OracleReport {
    pub i: usize,
    pub dim: usize,
    pub pairs_checked: usize,
    /// Basis position pairs where the two products differ.
    pub mismatches: Vec<(usize, usize)>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the closed-form and oracle products on every ordered basis pair of `V_i`.
pub fn verify_oracle_equivalence(f: &FamilySpec, i: usize, budget: u128) -> Result<OracleReport> {
    let oracle = ProjectionOracle::new(f, i, budget)?;
    let table = MonomialTable::from_family(f, i)?;
    let dim = table.dim();
    let mismatches: Vec<(usize, usize)> = (0..dim)
        .into_par_iter()
        .flat_map_iter(|a| {
            let oracle = &oracle;
            let table = &table;
            (0..dim).filter_map(move |b| {
                let closed = match table.get(a, b) {
                    Some(k) => table.basis_vector(k),
                    None => table.zero(),
                };
                (oracle.basis_product(a, b) != closed).then_some((a, b))
            })
        })
        .collect();
    Ok(OracleReport { i, dim, pairs_checked: dim * dim, mismatches })
}

/// Identity element of `V_i` by exact linear solve, or `None` if not unital.
pub fn find_identity(f: &FamilySpec, i: usize) -> Result<Option<AlgebraVector>> {
    let table = MonomialTable::from_family(f, i)?;
    let d = table.dim();
    if d > IDENTITY_DIM_BUDGET {
        return Err(Error::BudgetExceeded { needed: d as u128, budget: IDENTITY_DIM_BUDGET as u128 });
    }
    let e = table.order();
    // Equation (v, w): Σ_u c_u [χ_u ⋆ χ_v]_w = δ_{vw}.
    let mut hits: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for u in 0..d {
        for v in 0..d {
            if let Some(w) = table.get(u, v) {
                hits.entry((v, w)).or_default().push(u);
            }
        }
    }
    for v in 0..d {
        if !hits.contains_key(&(v, v)) {
            // χ_v never appears in any product with χ_v
            return Ok(None);
        }
    }
    let mut rows = Vec::with_capacity(hits.len());
    let mut rhs = Vec::with_capacity(hits.len());
    for ((v, w), us) in &hits {
        let mut row = vec![Cyclotomic::zero(e); d];
        for &u in us {
            row[u] = &row[u] + &Cyclotomic::one(e);
        }
        rows.push(row);
        rhs.push(Cyclotomic::from_integer(e, (v == w) as i64));
    }
    let Some(x) = linalg::solve(&rows, &rhs, e) else { return Ok(None) };
    let identity = AlgebraVector::from_terms(i, d, e, x.into_iter().enumerate())?;
    // The equations cover every nonzero structure constant; confirm anyway.
    for v in table.basis_vectors() {
        if table.product(&identity, &v)? != v {
            return Err(Error::CheckFailed("solved identity does not act as identity".into()));
        }
    }
    Ok(Some(identity))
}

/// Checks that `map` (a bijection of basis positions) carries products of `a`
/// to products of `b` on every basis pair.
pub fn verify_isomorphism(map: &[usize], a: &MonomialTable, b: &MonomialTable) -> Result<bool> {
    if map.len() != a.dim() || a.dim() != b.dim() {
        return Err(Error::InvalidParameter(format!(
            "map of length {} between algebras of dimension {} and {}",
            map.len(),
            a.dim(),
            b.dim()
        )));
    }
    let mut seen = vec![false; b.dim()];
    for &t in map {
        if t >= b.dim() || std::mem::replace(&mut seen[t], true) {
            return Err(Error::InvalidParameter("map is not a bijection".into()));
        }
    }
    let d = a.dim();
    Ok((0..d).into_par_iter().all(|x| {
        (0..d).all(|y| a.get(x, y).map(|k| map[k]) == b.get(map[x], map[y]))
    }))
}

/// Every nonzero idempotent with coefficients in `{0, ±c}`, by exhaustive search.
pub fn sign_idempotents(table: &MonomialTable, c: &Rational) -> Result<Vec<AlgebraVector>> {
    let d = table.dim();
    let total = 3u128.checked_pow(d as u32).unwrap_or(u128::MAX);
    const BUDGET: u128 = 1_000_000;
    if total > BUDGET {
        return Err(Error::BudgetExceeded { needed: total, budget: BUDGET });
    }
    let e = table.order();
    let plus = Cyclotomic::from_rational(e, c);
    let minus = -&plus;
    let mut found = Vec::new();
    for code in 1..total {
        let mut c = code;
        let mut v = table.zero();
        for k in 0..d {
            let digit = (c % 3) as i64;
            c /= 3;
            if digit != 0 {
                v.set(k, if digit == 1 { plus.clone() } else { minus.clone() })?;
            }
        }
        if table.is_idempotent(&v)? {
            found.push(v);
        }
    }
    Ok(found)
}

/// An idempotent of `V_1(H(1,e))` with its support in the `η` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idempotent {
    pub vector: AlgebraVector,
    pub support: Vec<usize>,
}

fn h1(e: u32) -> Result<(FamilySpec, MonomialTable)> {
    if e < 3 {
        return Err(Error::InvalidParameter(format!("idempotent machinery needs e >= 3, got {e}")));
    }
    let f = make_family(FamilyKind::Hamming { n: 1, e })?;
    let t = MonomialTable::from_family(&f, 1)?;
    Ok((f, t))
}

fn chi_position(f: &FamilySpec, k: u32) -> usize {
    f.position(1, &GroupElement::new(vec![k])).expect("nonzero residue lies in X_1")
}

fn eta_vector(f: &FamilySpec, e: u32, j: u32) -> Result<AlgebraVector> {
    let scale = Rational::new(1.into(), (e as i64 - 2).into());
    let terms = (1..e).map(|k| {
        let pos = chi_position(f, k);
        (pos, Cyclotomic::root_power(e, j as i64 * k as i64).scale(&scale))
    });
    AlgebraVector::from_terms(1, e as usize - 1, e, terms)
}

/// `η_j = (1/(e−2)) Σ_k ω^{jk} χ_k` in `V_1(H(1,e))`, verified idempotent.
pub fn eta(e: u32, j: u32) -> Result<Idempotent> {
    let (f, t) = h1(e)?;
    if j >= e {
        return Err(Error::OutOfRange(format!("eta index {j} >= {e}")));
    }
    let vector = eta_vector(&f, e, j)?;
    if !t.is_idempotent(&vector)? {
        return Err(Error::CheckFailed(format!("eta_{j} is not idempotent for e = {e}")));
    }
    Ok(Idempotent { vector, support: vec![j as usize] })
}

fn subsets_of_size(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    let n = items.len();
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|&k| m >> k & 1 == 1).map(|k| items[k]).collect())
        .collect()
}

fn eta_sum(f: &FamilySpec, e: u32, js: &[u32], c: &Rational) -> Result<AlgebraVector> {
    let mut acc = AlgebraVector::zero(1, e as usize - 1, e);
    for &j in js {
        acc = acc.checked_add(&eta_vector(f, e, j)?)?;
    }
    Ok(acc.scale_rational(c))
}

/// All nonzero idempotents of `V_1(H(1,e))`: `(e−2)/(e−2ℓ)(η_{j_1}+⋯+η_{j_ℓ})`
/// over nonempty `{j_1,…,j_ℓ} ⊆ [e−1]` with `ℓ ≠ e/2`, each verified.
pub fn classified_idempotents(e: u32) -> Result<Vec<Idempotent>> {
    let (f, t) = h1(e)?;
    let items: Vec<u32> = (1..e).collect();
    let mut out = Vec::new();
    for ell in 1..e as usize {
        if 2 * ell == e as usize {
            continue;
        }
        let c = Rational::new((e as i64 - 2).into(), (e as i64 - 2 * ell as i64).into());
        for js in subsets_of_size(&items, ell) {
            let vector = eta_sum(&f, e, &js, &c)?;
            if !t.is_idempotent(&vector)? {
                return Err(Error::CheckFailed(format!("support {js:?} does not give an idempotent")));
            }
            out.push(Idempotent { vector, support: js.iter().map(|&j| j as usize).collect() });
        }
    }
    let distinct: HashSet<&AlgebraVector> = out.iter().map(|x| &x.vector).collect();
    if distinct.len() != out.len() {
        return Err(Error::CheckFailed("classified idempotents are not pairwise distinct".into()));
    }
    Ok(out)
}

/// One order-2 nilpotent `η_{j_1}+⋯+η_{j_{e/2}}` per `e/2`-subset of `[e−1]`,
/// each verified to square to zero. Empty for odd `e`.
pub fn nilpotents_order2_classified(e: u32) -> Result<Vec<AlgebraVector>> {
    let (f, t) = h1(e)?;
    if e % 2 == 1 {
        return Ok(Vec::new());
    }
    let items: Vec<u32> = (1..e).collect();
    let one = Rational::from_integer(1.into());
    let mut out = Vec::new();
    for js in subsets_of_size(&items, e as usize / 2) {
        let v = eta_sum(&f, e, &js, &one)?;
        if v.is_zero() || !t.product(&v, &v)?.is_zero() {
            return Err(Error::CheckFailed(format!("support {js:?} is not nilpotent of order 2")));
        }
        out.push(v);
    }
    Ok(out)
}

/// `η_j ⋆ η_k = −(η_j+η_k)/(e−2)` for `j ≠ k`, `η_j ⋆ η_j = η_j`, and `Σ η_j = 0`.
pub fn eta_relations_check(e: u32) -> Result<bool> {
    let (f, t) = h1(e)?;
    let etas: Vec<AlgebraVector> = (0..e).map(|j| eta_vector(&f, e, j)).collect::<Result<_>>()?;
    let scale = Rational::new((-1).into(), (e as i64 - 2).into());
    for (j, a) in etas.iter().enumerate() {
        for (k, b) in etas.iter().enumerate() {
            let p = t.product(a, b)?;
            let expected = if j == k { a.clone() } else { (a + b).scale_rational(&scale) };
            if p != expected {
                return Ok(false);
            }
        }
    }
    let total = etas.iter().try_fold(t.zero(), |acc, x| acc.checked_add(x))?;
    Ok(total.is_zero())
}

/// For each pair of classified idempotents: nonorthogonality, and whether some
/// `c(η+η′)` is idempotent exactly in the two predicted cases with the
/// predicted `c`.
pub fn primitivity_facts_check(e: u32) -> Result<bool> {
    if e > PRIMITIVITY_MAX_E {
        return Err(Error::BudgetExceeded { needed: e as u128, budget: PRIMITIVITY_MAX_E as u128 });
    }
    let (_, t) = h1(e)?;
    let ids = classified_idempotents(e)?;
    let e_i = e as i64;
    for (x, eta) in ids.iter().enumerate() {
        for eta2 in &ids[x + 1..] {
            if t.product(&eta.vector, &eta2.vector)?.is_zero() {
                return Ok(false);
            }
            let (big, small) = if eta.support.len() >= eta2.support.len() { (eta, eta2) } else { (eta2, eta) };
            let (l, l2) = (big.support.len() as i64, small.support.len() as i64);
            let disjoint = big.support.iter().all(|j| !small.support.contains(j));
            let contains = small.support.iter().all(|j| big.support.contains(j));
            let predicted = if disjoint && l == l2 {
                Some((e_i - 2 * l, e_i - 4 * l))
            } else if contains && l2 == e_i - l {
                Some((e_i - 2 * l, 3 * e_i - 4 * l))
            } else {
                None
            };
            let s = eta.vector.checked_add(&eta2.vector)?;
            let sq = t.product(&s, &s)?;
            match predicted {
                Some((num, den)) if den != 0 => {
                    let c = Rational::new(num.into(), den.into());
                    if !t.is_idempotent(&s.scale_rational(&c))? {
                        return Ok(false);
                    }
                }
                // zero denominator: no multiple is idempotent, the sum is nilpotent
                Some(_) => {
                    if s.is_zero() || !sq.is_zero() {
                        return Ok(false);
                    }
                }
                None => {
                    if proportional(&sq, &s) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

// Whether `a = λ b` for some nonzero λ.
fn proportional(a: &AlgebraVector, b: &AlgebraVector) -> bool {
    if a.is_zero() || b.is_zero() || a.support() != b.support() {
        return false;
    }
    let (k, bk) = b.terms().next().expect("nonzero");
    let lambda = a.coeff(k).checked_div(bk).expect("nonzero");
    b.scale(&lambda) == *a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyKind;

    fn fam(kind: FamilyKind) -> FamilySpec {
        make_family(kind).unwrap()
    }

    fn one(e: u32) -> Cyclotomic {
        Cyclotomic::one(e)
    }

    fn named(f: &FamilySpec, i: usize, terms: &[(&str, i64)]) -> AlgebraVector {
        let e = f.order();
        let ts: Vec<(&str, Cyclotomic)> = terms.iter().map(|&(s, c)| (s, Cyclotomic::from_integer(e, c))).collect();
        AlgebraVector::from_named(f, i, &ts).unwrap()
    }

    #[test]
    fn oracle_examples_match_closed_form() {
        let h = fam(FamilyKind::Hamming { n: 2, e: 3 });
        let x01 = named(&h, 1, &[("01", 1)]);
        let cases = [
            (x01.clone(), x01.clone(), named(&h, 1, &[("02", 1)])),
            (named(&h, 2, &[("11", 1)]), named(&h, 2, &[("22", 1)]), AlgebraVector::zero_in(&h, 2).unwrap()),
            (named(&h, 1, &[("01", 2)]), named(&h, 1, &[("01", 3)]), named(&h, 1, &[("02", 6)])),
        ];
        for (v, w, expected) in cases {
            assert_eq!(oracle_product(&h, &v, &w).unwrap(), expected);
            assert_eq!(closed_form_product(&h, &v, &w).unwrap(), expected);
        }
        let q3 = fam(FamilyKind::Hypercube { n: 3 });
        let v = named(&q3, 2, &[("12", 1), ("13", 1)]);
        let w = named(&q3, 2, &[("23", 1)]);
        let expected = named(&q3, 2, &[("12", 1), ("13", 1)]);
        assert_eq!(oracle_product(&q3, &v, &w).unwrap(), expected);
        assert_eq!(closed_form_product(&q3, &v, &w).unwrap(), expected);
        let zero = AlgebraVector::zero_in(&q3, 2).unwrap();
        assert!(closed_form_product(&q3, &zero, &v).unwrap().is_zero());
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let h = fam(FamilyKind::Hamming { n: 2, e: 3 });
        let a = named(&h, 1, &[("01", 1)]);
        let b = named(&h, 2, &[("11", 1)]);
        assert!(closed_form_product(&h, &a, &b).is_err());
        assert!(oracle_product(&h, &a, &b).is_err());
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn eta_examples() {
        let f = fam(FamilyKind::Hamming { n: 1, e: 3 });
        assert_eq!(eta(3, 0).unwrap().vector, named(&f, 1, &[("1", 1), ("2", 1)]));
        let w = |k| Cyclotomic::root_power(3, k);
        let expected = AlgebraVector::from_named(&f, 1, &[("1", w(1)), ("2", w(2))]).unwrap();
        assert_eq!(eta(3, 1).unwrap().vector, expected);
        let f4 = fam(FamilyKind::Hamming { n: 1, e: 4 });
        let half = Rational::new(1.into(), 2.into());
        let expected = named(&f4, 1, &[("1", 1), ("2", 1), ("3", 1)]).scale_rational(&half);
        assert_eq!(eta(4, 0).unwrap().vector, expected);
        assert!(eta(2, 0).is_err());
    }

    #[test]
    fn idempotent_counts() {
        assert_eq!(classified_idempotents(3).unwrap().len(), 3);
        assert_eq!(classified_idempotents(4).unwrap().len(), 4);
        // nonempty subsets of a 4-element set
        assert_eq!(classified_idempotents(5).unwrap().len(), 15);
    }

    #[test]
    fn nilpotent_counts() {
        assert_eq!(nilpotents_order2_classified(4).unwrap().len(), 3);
        assert!(nilpotents_order2_classified(3).unwrap().is_empty());
        assert_eq!(nilpotents_order2_classified(6).unwrap().len(), 10);
    }

    #[test]
    fn eta_relations_and_primitivity() {
        for e in [3, 4, 7] {
            assert!(eta_relations_check(e).unwrap(), "e={e}");
        }
        for e in 3..=5 {
            assert!(primitivity_facts_check(e).unwrap(), "e={e}");
        }
        assert!(primitivity_facts_check(8).is_err());
    }

    #[test]
    fn disjoint_singleton_sum_is_idempotent_after_scaling() {
        let ids = classified_idempotents(5).unwrap();
        let singles: Vec<&Idempotent> = ids.iter().filter(|x| x.support.len() == 1).collect();
        let (_, t) = h1(5).unwrap();
        let s = singles[0].vector.checked_add(&singles[1].vector).unwrap();
        let c = Rational::from_integer(3.into());
        assert!(t.is_idempotent(&s.scale_rational(&c)).unwrap());
    }

    #[test]
    fn identity_examples() {
        let h = fam(FamilyKind::Hamming { n: 2, e: 3 });
        assert_eq!(find_identity(&h, 0).unwrap(), Some(named(&h, 0, &[("00", 1)])));
        assert_eq!(find_identity(&h, 1).unwrap(), None);
        assert_eq!(find_identity(&fam(FamilyKind::Hypercube { n: 3 }), 2).unwrap(), None);
    }

    #[test]
    fn isomorphism_examples() {
        let h = fam(FamilyKind::Hamming { n: 2, e: 3 });
        let t1 = MonomialTable::from_family(&h, 1).unwrap();
        assert!(verify_isomorphism(&[0, 1, 2, 3], &t1, &t1).unwrap());
        assert!(verify_isomorphism(&[1, 0, 3, 2], &t1, &t1).unwrap());
        assert!(!verify_isomorphism(&[2, 1, 0, 3], &t1, &t1).unwrap());
        assert!(verify_isomorphism(&[0, 0, 2, 3], &t1, &t1).is_err());
        let folded = fam(FamilyKind::FoldedCube { n: 4 });
        let q4 = fam(FamilyKind::Hypercube { n: 4 });
        let a = MonomialTable::from_family(&folded, 1).unwrap();
        let b = MonomialTable::from_family(&q4, 2).unwrap();
        assert!(verify_isomorphism(&(0..6).collect::<Vec<_>>(), &a, &b).unwrap());
    }

    #[test]
    fn sign_idempotents_of_v2_q3() {
        let t = MonomialTable::from_family(&fam(FamilyKind::Hypercube { n: 3 }), 2).unwrap();
        assert!(sign_idempotents(&t, &Rational::from_integer(1.into())).unwrap().is_empty());
        let half = Rational::new(1.into(), 2.into());
        let found = sign_idempotents(&t, &half).unwrap();
        assert_eq!(found.len(), 4);
        let f = fam(FamilyKind::Hypercube { n: 3 });
        let all = named(&f, 2, &[("12", 1), ("13", 1), ("23", 1)]);
        assert_eq!(t.product(&all, &all).unwrap(), all.scale_rational(&Rational::from_integer(2.into())));
        assert!(found.contains(&all.scale_rational(&half)));
    }

    #[test]
    fn value_table_and_projection_round_trip() {
        let h = fam(FamilyKind::Hamming { n: 2, e: 3 });
        let o = ProjectionOracle::new(&h, 1, 4096).unwrap();
        let v = AlgebraVector::from_named(&h, 1, &[("01", Cyclotomic::root_power(3, 1)), ("20", one(3))]).unwrap();
        let table = o.value_table(&v).unwrap();
        assert_eq!(o.project(&table).unwrap(), v);
    }
}
