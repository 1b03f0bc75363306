//! Finite abelian groups `Z_e^n` and `Mat_{d×e}(F_q)` with their linear characters.
//!
//! Elements are flat residue vectors; matrices are stored row-major. Since
//! `tr(uᵀx)` is the entrywise dot product, both cases share one pairing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Default cap on the number of elements [`Group::enumerate`] will produce.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Group {
    /// Words of length `n` over `Z_e`.
    Word { n: usize, e: u32 },
    /// `rows × cols` matrices over the prime field `F_q`.
    Matrix { rows: usize, cols: usize, q: u32 },
}

/// An element of a [`Group`]; entries are residues in `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    entries: Vec<u32>,
}

/// A character `χ_u` is named by the group element `u`.
pub type CharIndex = GroupElement;

impl GroupElement {
    pub fn new(entries: Vec<u32>) -> Self {
        GroupElement { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Positions with nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&j| self.entries[j] != 0).collect()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&x| x != 0).count()
    }
}

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl Group {
    pub fn word(n: usize, e: u32) -> Result<Self> {
        if n == 0 || e < 2 {
            return Err(Error::InvalidParameter(format!(
                "word group needs n >= 1 and e >= 2, got n={n}, e={e}"
            )));
        }
        Ok(Group::Word { n, e })
    }

    pub fn matrix(rows: usize, cols: usize, q: u32) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        if !is_prime(q) {
            return Err(Error::InvalidParameter(format!("q = {q} is not prime")));
        }
        Ok(Group::Matrix { rows, cols, q })
    }

    /// The modulus of every entry, which is also the order of the character values.
    pub fn modulus(&self) -> u32 {
        match *self {
            Group::Word { e, .. } => e,
            Group::Matrix { q, .. } => q,
        }
    }

    /// Number of entries per element.
    pub fn rank(&self) -> usize {
        match *self {
            Group::Word { n, .. } => n,
            Group::Matrix { rows, cols, .. } => rows * cols,
        }
    }

    /// `|G|`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        (self.modulus() as u128).checked_pow(self.rank() as u32)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn element(&self, entries: Vec<u32>) -> Result<GroupElement> {
        let m = self.modulus();
        if entries.len() != self.rank() {
            return Err(Error::NotInGroup(format!(
                "expected {} entries, found {}",
                self.rank(),
                entries.len()
            )));
        }
        if let Some(x) = entries.iter().find(|&&x| x >= m) {
            return Err(Error::NotInGroup(format!("entry {x} is not a residue mod {m}")));
        }
        Ok(GroupElement::new(entries))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.len() == self.rank() && g.entries.iter().all(|&x| x < self.modulus())
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{g:?} is not an element of {self}")))
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let m = self.modulus();
        Ok(GroupElement::new(
            g.entries.iter().zip(&h.entries).map(|(a, b)| (a + b) % m).collect(),
        ))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let m = self.modulus();
        Ok(GroupElement::new(g.entries.iter().map(|a| (m - a) % m).collect()))
    }

    /// Exponent `k` with `χ_u(x) = ω^k`: the dot product of entries mod the modulus.
    pub fn pairing(&self, u: &GroupElement, x: &GroupElement) -> u32 {
        let m = self.modulus() as u64;
        let s: u64 = u
            .entries
            .iter()
            .zip(&x.entries)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        (s % m) as u32
    }

    pub fn character_value(&self, u: &CharIndex, x: &GroupElement) -> Result<Cyclotomic> {
        self.check(u)?;
        self.check(x)?;
        Ok(Cyclotomic::root_power(self.modulus(), self.pairing(u, x) as i64))
    }

    /// Element with the given lexicographic position.
    pub fn element_at(&self, mut code: u128) -> GroupElement {
        let m = self.modulus() as u128;
        let mut entries = vec![0u32; self.rank()];
        for slot in entries.iter_mut().rev() {
            *slot = (code % m) as u32;
            code /= m;
        }
        GroupElement::new(entries)
    }

    /// Lexicographic position of an element.
    pub fn position(&self, g: &GroupElement) -> u128 {
        let m = self.modulus() as u128;
        g.entries.iter().fold(0u128, |acc, &x| acc * m + x as u128)
    }

    /// All elements in lexicographic order.
    pub fn enumerate(&self, budget: u128) -> Result<Vec<GroupElement>> {
        let size = self.order().unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded { needed: size, budget });
        }
        Ok((0..size).map(|c| self.element_at(c)).collect())
    }

    /// Human-readable form: a digit string for words with `e ≤ 10`, otherwise
    /// comma-separated residues; matrices as `[row;row]`.
    pub fn format(&self, g: &GroupElement) -> String {
        match *self {
            Group::Word { e, .. } if e <= 10 => g.entries.iter().map(|x| x.to_string()).collect(),
            Group::Word { .. } => join(&g.entries, ","),
            Group::Matrix { cols, .. } => {
                let rows: Vec<String> = g.entries.chunks(cols).map(|r| join(r, ",")).collect();
                format!("[{}]", rows.join(";"))
            }
        }
    }

    /// JSON form: a string for words, an array of rows for matrices.
    pub fn to_json(&self, g: &GroupElement) -> serde_json::Value {
        match *self {
            Group::Word { .. } => serde_json::Value::String(self.format(g)),
            Group::Matrix { cols, .. } => serde_json::Value::Array(
                g.entries
                    .chunks(cols)
                    .map(|r| serde_json::Value::from(r.to_vec()))
                    .collect(),
            ),
        }
    }

    /// Inverse of [`Group::format`].
    pub fn parse(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let bad = |what: &str| Error::Parse(format!("{what} in {s:?}"));
        let entries: Vec<u32> = match *self {
            Group::Word { e, .. } if e <= 10 && !s.contains(',') => s
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| bad("non-digit")))
                .collect::<Result<_>>()?,
            Group::Word { .. } => s
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad("bad residue")))
                .collect::<Result<_>>()?,
            Group::Matrix { .. } => s
                .trim_start_matches('[')
                .trim_end_matches(']')
                .split([';', ','])
                .map(|t| t.trim().parse().map_err(|_| bad("bad residue")))
                .collect::<Result<_>>()?,
        };
        self.element(entries)
    }
}

fn join(xs: &[u32], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Group::Word { n, e } => write!(f, "Z_{e}^{n}"),
            Group::Matrix { rows, cols, q } => write!(f, "Mat_{rows}x{cols}(F_{q})"),
        }
    }
}

/// Hermitian inner product `(1/|G|) Σ φ(g) conj(ψ(g))` of two value tables.
pub fn inner_product(phi: &[Cyclotomic], psi: &[Cyclotomic]) -> Result<Cyclotomic> {
    if phi.len() != psi.len() {
        return Err(Error::LengthMismatch { expected: phi.len(), found: psi.len() });
    }
    let Some(first) = phi.first() else {
        return Err(Error::InvalidParameter("empty value table".into()));
    };
    let mut acc = Cyclotomic::zero(first.order());
    for (a, b) in phi.iter().zip(psi) {
        acc = acc.checked_add(&a.checked_mul(&b.conj())?)?;
    }
    let size = crate::cyclotomic::Rational::new(1.into(), phi.len().into());
    Ok(acc.scale(&size))
}

/// Value table of `χ_u` over the listed elements.
pub fn character_table(group: &Group, u: &CharIndex, xs: &[GroupElement]) -> Vec<Cyclotomic> {
    let e = group.modulus();
    xs.iter()
        .map(|x| Cyclotomic::root_power(e, group.pairing(u, x) as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3sq() -> Group {
        Group::word(2, 3).unwrap()
    }

    fn el(g: &Group, s: &str) -> GroupElement {
        g.parse(s).unwrap()
    }

    #[test]
    fn addition_examples() {
        let g = z3sq();
        assert_eq!(g.add(&el(&g, "01"), &el(&g, "01")).unwrap(), el(&g, "02"));
        assert_eq!(g.add(&el(&g, "12"), &el(&g, "21")).unwrap(), el(&g, "00"));
        assert_eq!(g.add(&el(&g, "11"), &el(&g, "12")).unwrap(), el(&g, "20"));
        let other = Group::word(3, 3).unwrap();
        assert!(g.add(&el(&g, "11"), &el(&other, "111")).is_err());
    }

    #[test]
    fn character_value_examples() {
        let g = z3sq();
        let w2 = Cyclotomic::root_power(3, 2);
        assert_eq!(g.character_value(&el(&g, "10"), &el(&g, "20")).unwrap(), w2);
        assert!(g.character_value(&el(&g, "00"), &el(&g, "21")).unwrap().is_one());
        assert!(g.character_value(&el(&g, "11"), &el(&g, "21")).unwrap().is_one());
    }

    #[test]
    fn enumeration_examples() {
        let z2 = Group::word(1, 2).unwrap();
        let names: Vec<String> = z2.enumerate(16).unwrap().iter().map(|x| z2.format(x)).collect();
        assert_eq!(names, ["0", "1"]);
        let g = z3sq();
        let names: Vec<String> = g.enumerate(100).unwrap().iter().map(|x| g.format(x)).collect();
        assert_eq!(names, ["00", "01", "02", "10", "11", "12", "20", "21", "22"]);
        let m = Group::matrix(1, 1, 2).unwrap();
        let json: Vec<_> = m.enumerate(4).unwrap().iter().map(|x| m.to_json(x)).collect();
        assert_eq!(serde_json::to_string(&json).unwrap(), "[[[0]],[[1]]]");
        assert!(matches!(g.enumerate(8), Err(Error::BudgetExceeded { .. })));
        assert_eq!(Group::matrix(2, 2, 3).unwrap().enumerate(1000).unwrap().len(), 81);
    }

    #[test]
    fn non_prime_matrix_group_rejected() {
        assert!(Group::matrix(2, 2, 4).is_err());
        assert!(Group::word(0, 3).is_err());
        assert!(Group::word(2, 1).is_err());
    }

    #[test]
    fn formatting_round_trips() {
        let big = Group::word(2, 12).unwrap();
        let x = big.element(vec![11, 3]).unwrap();
        assert_eq!(big.format(&x), "11,3");
        assert_eq!(big.parse("11,3").unwrap(), x);
        let m = Group::matrix(2, 2, 2).unwrap();
        let a = m.element(vec![1, 0, 1, 1]).unwrap();
        assert_eq!(m.format(&a), "[1,0;1,1]");
        assert_eq!(m.parse("[1,0;1,1]").unwrap(), a);
        assert!(m.parse("[1,0;1,2]").is_err());
    }

    #[test]
    fn inner_product_examples() {
        let g = z3sq();
        let xs = g.enumerate(100).unwrap();
        let t = |s: &str| character_table(&g, &el(&g, s), &xs);
        assert!(inner_product(&t("12"), &t("12")).unwrap().is_one());
        assert!(inner_product(&t("10"), &t("01")).unwrap().is_zero());
        assert!(inner_product(&t("00"), &t("00")).unwrap().is_one());
        assert!(inner_product(&t("00"), &t("00")[..3]).is_err());
    }

    #[test]
    fn support_and_weight() {
        let g = Group::word(4, 3).unwrap();
        let x = el(&g, "0201");
        assert_eq!(x.support(), vec![1, 3]);
        assert_eq!(x.weight(), 2);
        assert_eq!(g.position(&x), 2 * 9 + 1);
        assert_eq!(g.element_at(19), x);
    }
}
