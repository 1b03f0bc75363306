//! Automorphism actions on family eigenspaces, and a verifier for candidate
//! basis-level maps.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilySpec, SubsetIndex};
use crate::fq;
use crate::groups::{CharIndex, GroupElement};
use crate::linalg;
use crate::norton::{eta, AlgebraVector, MonomialTable};

/// Enumeration cap for [`kernel_check_hamming`].
pub const KERNEL_MAX_N: usize = 3;
pub const KERNEL_MAX_E: u32 = 3;

/// A linear map on `V_i`, given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMap {
    images: Vec<AlgebraVector>,
}

impl BasisMap {
    pub fn new(images: Vec<AlgebraVector>) -> Self {
        BasisMap { images }
    }

    /// `χ_k ↦ c_k χ_{π(k)}`.
    pub fn monomial(table: &MonomialTable, terms: &[(usize, Cyclotomic)]) -> Result<Self> {
        let images = terms
            .iter()
            .map(|(k, c)| {
                let mut v = table.zero();
                v.set(*k, c.clone())?;
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Ok(BasisMap { images })
    }

    pub fn identity(table: &MonomialTable) -> Self {
        BasisMap { images: table.basis_vectors() }
    }

    pub fn images(&self) -> &[AlgebraVector] {
        &self.images
    }

    /// `(target, coefficient)` per basis vector when every image is a scaled basis vector.
    pub fn as_monomial(&self) -> Option<Vec<(usize, Cyclotomic)>> {
        self.images
            .iter()
            .map(|v| {
                let mut terms = v.terms();
                let (k, c) = terms.next()?;
                terms.next().is_none().then(|| (k, c.clone()))
            })
            .collect()
    }

    pub fn apply(&self, v: &AlgebraVector) -> Result<AlgebraVector> {
        if v.dim() != self.images.len() {
            return Err(Error::LengthMismatch { expected: self.images.len(), found: v.dim() });
        }
        let mut out = self.images.first().map_or_else(|| v.clone(), |w| AlgebraVector::zero(w.space(), w.dim(), w.order()));
        for (k, c) in v.terms() {
            out = out.checked_add(&self.images[k].scale(c))?;
        }
        Ok(out)
    }
}

fn check_candidate(map: &BasisMap, table: &MonomialTable) -> Result<()> {
    if map.images.len() != table.dim() {
        return Err(Error::LengthMismatch { expected: table.dim(), found: map.images.len() });
    }
    for v in &map.images {
        if (v.space(), v.dim(), v.order()) != (table.space(), table.dim(), table.order()) {
            return Err(Error::SpaceMismatch(format!("image lies in V_{} of dimension {}", v.space(), v.dim())));
        }
    }
    Ok(())
}

/// Whether `map` is a bijective algebra endomorphism of `table`, checked on
/// every basis pair with exact arithmetic.
pub fn is_table_automorphism(map: &BasisMap, table: &MonomialTable) -> Result<bool> {
    check_candidate(map, table)?;
    let d = table.dim();
    if let Some(mono) = map.as_monomial() {
        let mut seen = vec![false; d];
        for (k, _) in &mono {
            if std::mem::replace(&mut seen[*k], true) {
                return Ok(false);
            }
        }
        return Ok((0..d).into_par_iter().all(|a| {
            (0..d).all(|b| {
                let lhs = table.get(a, b).map(|k| (mono[k].0, mono[k].1.clone()));
                let rhs = table.get(mono[a].0, mono[b].0).map(|k| (k, &mono[a].1 * &mono[b].1));
                lhs == rhs
            })
        }));
    }
    let rows: Vec<Vec<Cyclotomic>> =
        map.images.iter().map(|v| (0..d).map(|k| v.coeff(k)).collect()).collect();
    if linalg::rank(&rows) != d {
        return Ok(false);
    }
    let basis = table.basis_vectors();
    (0..d)
        .into_par_iter()
        .map(|a| {
            for b in a..d {
                let lhs = map.apply(&table.product(&basis[a], &basis[b])?)?;
                let rhs = table.product(&map.images[a], &map.images[b])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()
        .map(|v| v.into_iter().all(|x| x))
}

pub fn is_algebra_automorphism(map: &BasisMap, f: &FamilySpec, i: usize) -> Result<bool> {
    is_table_automorphism(map, &MonomialTable::from_family(f, i)?)
}

/// Turns an action on character indices into a basis map on `V_i`.
fn action_map(
    f: &FamilySpec,
    i: usize,
    act: impl Fn(&CharIndex) -> Result<(Cyclotomic, CharIndex)>,
) -> Result<BasisMap> {
    let table = MonomialTable::from_family(f, i)?;
    let terms = f
        .basis(i)?
        .iter()
        .map(|u| {
            let (c, v) = act(u)?;
            let k = f.position(i, &f.canonical(&v)).ok_or_else(|| {
                Error::NotAutomorphism(format!("{} leaves V_{i}", f.format_index(&v)))
            })?;
            Ok((k, c))
        })
        .collect::<Result<Vec<_>>>()?;
    BasisMap::monomial(&table, &terms)
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::InvalidParameter(format!("{sigma:?} is not a permutation of {n} points")));
    }
    Ok(())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn unit_inverse(b: u32, e: u32) -> u32 {
    (1..e).find(|&x| b as u64 * x as u64 % e as u64 == 1).expect("b is a unit")
}

/// `(a, b, σ)` in `Z_e ≀ (Z_e^× ≀ S_n)`, acting by `χ_u ↦ χ_a(b·σ(u)) χ_{b·σ(u)}`.
///
/// `sigma` is 0-based: coordinate `j` moves to `sigma[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HammingAuto {
    pub n: usize,
    pub e: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub sigma: Vec<usize>,
}

impl HammingAuto {
    pub fn new(n: usize, e: u32, a: Vec<u32>, b: Vec<u32>, sigma: Vec<usize>) -> Result<Self> {
        if e < 2 {
            return Err(Error::InvalidParameter(format!("e = {e} < 2")));
        }
        if a.len() != n || a.iter().any(|&x| x >= e) {
            return Err(Error::InvalidParameter(format!("a = {a:?} is not a word in Z_{e}^{n}")));
        }
        if b.len() != n || b.iter().any(|&x| x >= e || gcd(x, e) != 1) {
            return Err(Error::InvalidParameter(format!("b = {b:?} has entries that are not units mod {e}")));
        }
        check_permutation(&sigma, n)?;
        Ok(HammingAuto { n, e, a, b, sigma })
    }

    pub fn identity(n: usize, e: u32) -> Self {
        HammingAuto { n, e, a: vec![0; n], b: vec![1; n], sigma: (0..n).collect() }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, e: u32, rng: &mut R) -> Self {
        let units: Vec<u32> = (1..e).filter(|&x| gcd(x, e) == 1).collect();
        let a = (0..n).map(|_| rng.gen_range(0..e)).collect();
        let b = (0..n).map(|_| *units.choose(rng).expect("1 is a unit")).collect();
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(rng);
        HammingAuto { n, e, a, b, sigma }
    }

    fn permute(&self, w: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.n];
        for (j, &x) in w.iter().enumerate() {
            out[self.sigma[j]] = x;
        }
        out
    }

    /// The wreath-product composite `self ∘ other`: `(a + b⁻¹σ(a′), bσ(b′), σσ′)`.
    pub fn compose(&self, other: &HammingAuto) -> Result<HammingAuto> {
        if (self.n, self.e) != (other.n, other.e) {
            return Err(Error::InvalidParameter("composing actions on different groups".into()));
        }
        let e = self.e;
        let sa = self.permute(&other.a);
        let sb = self.permute(&other.b);
        let a = (0..self.n)
            .map(|j| (self.a[j] + unit_inverse(self.b[j], e) * sa[j]) % e)
            .collect();
        let b = (0..self.n).map(|j| self.b[j] * sb[j] % e).collect();
        let sigma = (0..self.n).map(|j| self.sigma[other.sigma[j]]).collect();
        Ok(HammingAuto { n: self.n, e, a, b, sigma })
    }

    /// Image of `χ_u` as `(coefficient, index)`.
    pub fn apply_index(&self, u: &CharIndex) -> Result<(Cyclotomic, CharIndex)> {
        if u.len() != self.n || u.entries().iter().any(|&x| x >= self.e) {
            return Err(Error::NotInGroup(format!("{u:?} is not a word in Z_{}^{}", self.e, self.n)));
        }
        let moved = self.permute(u.entries());
        let v: Vec<u32> = moved.iter().zip(&self.b).map(|(x, b)| x * b % self.e).collect();
        let k: u64 = v.iter().zip(&self.a).map(|(&x, &a)| x as u64 * a as u64).sum();
        Ok((Cyclotomic::root_power(self.e, k as i64), GroupElement::new(v)))
    }

    fn matches(&self, f: &FamilySpec) -> Result<()> {
        let (n, e) = match f.kind() {
            FamilyKind::Hamming { n, e } => (n, e),
            FamilyKind::Hypercube { n } => (n, 2),
            other => return Err(Error::Unsupported(format!("Hamming action on {other}"))),
        };
        if (n, e) != (self.n, self.e) {
            return Err(Error::InvalidParameter(format!("action on H({},{}) applied to {}", self.n, self.e, f.kind())));
        }
        Ok(())
    }

    pub fn basis_map(&self, f: &FamilySpec, i: usize) -> Result<BasisMap> {
        self.matches(f)?;
        action_map(f, i, |u| self.apply_index(u))
    }
}

/// Image of basis position `pos` of `V_i` as `(position, coefficient)`.
pub fn apply_hamming_auto(phi: &HammingAuto, f: &FamilySpec, i: usize, pos: usize) -> Result<(usize, Cyclotomic)> {
    phi.matches(f)?;
    let u = f
        .basis(i)?
        .get(pos)
        .ok_or_else(|| Error::OutOfRange(format!("basis position {pos} in V_{i}")))?;
    let (c, v) = phi.apply_index(u)?;
    let k = f.position(i, &v).ok_or_else(|| Error::NotAutomorphism("support not preserved".into()))?;
    Ok((k, c))
}

pub fn compose_hamming(phi: &HammingAuto, psi: &HammingAuto) -> Result<HammingAuto> {
    phi.compose(psi)
}

/// `(σ, ε)` in `S_n^B`, acting by `χ_S ↦ ε(σ(S)) χ_{σ(S)}`. 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedPermutation {
    pub sigma: Vec<usize>,
    pub epsilon: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(sigma: Vec<usize>, epsilon: Vec<i8>) -> Result<Self> {
        check_permutation(&sigma, sigma.len())?;
        if epsilon.len() != sigma.len() || epsilon.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(format!("epsilon {epsilon:?} is not a sign vector of length {}", sigma.len())));
        }
        Ok(SignedPermutation { sigma, epsilon })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// `ε([n]) = 1`.
    pub fn is_type_d(&self) -> bool {
        self.epsilon.iter().filter(|&&s| s == -1).count() % 2 == 0
    }

    /// All of `S_n^D`.
    pub fn all_type_d(n: usize) -> Vec<SignedPermutation> {
        let perms = permutations(n);
        let mut out = Vec::new();
        for sigma in &perms {
            for mask in 0u32..1 << n {
                if mask.count_ones() % 2 == 0 {
                    let epsilon = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
                    out.push(SignedPermutation { sigma: sigma.clone(), epsilon });
                }
            }
        }
        out
    }

    /// Sign and image of a subset, before any canonicalization.
    pub fn apply_subset(&self, s: SubsetIndex) -> (i64, SubsetIndex) {
        let image: Vec<usize> = s.elements().iter().map(|&j| self.sigma[j - 1] + 1).collect();
        let sign = image.iter().map(|&j| self.epsilon[j - 1] as i64).product();
        (sign, SubsetIndex::from_elements(&image))
    }

    fn target_n(&self, f: &FamilySpec, allow_non_d: bool) -> Result<usize> {
        let n = match f.kind() {
            FamilyKind::Hypercube { n } | FamilyKind::Hamming { n, e: 2 } => n,
            FamilyKind::HalvedCube { n } => {
                if !allow_non_d && !self.is_type_d() {
                    return Err(Error::NotAutomorphism("halved-cube actions need a type-D signed permutation".into()));
                }
                n
            }
            other => return Err(Error::Unsupported(format!("signed permutation on {other}"))),
        };
        if n != self.n() {
            return Err(Error::InvalidParameter(format!("signed permutation of {} points on {}", self.n(), f.kind())));
        }
        Ok(n)
    }

    fn map(&self, f: &FamilySpec, i: usize, allow_non_d: bool) -> Result<BasisMap> {
        let n = self.target_n(f, allow_non_d)?;
        let order = f.order();
        action_map(f, i, |u| {
            let (sign, t) = self.apply_subset(SubsetIndex::from_word(u));
            Ok((Cyclotomic::from_integer(order, sign), t.to_word(n)))
        })
    }

    pub fn basis_map(&self, f: &FamilySpec, i: usize) -> Result<BasisMap> {
        self.map(f, i, false)
    }

    /// As [`basis_map`](Self::basis_map), without the type-D requirement.
    pub fn basis_map_unchecked(&self, f: &FamilySpec, i: usize) -> Result<BasisMap> {
        self.map(f, i, true)
    }
}

/// Image of basis position `pos` as `(position, sign)`; halved-cube images are canonicalized.
pub fn apply_signed_perm(g: &SignedPermutation, f: &FamilySpec, i: usize, pos: usize) -> Result<(usize, i64)> {
    let n = g.target_n(f, false)?;
    let u = f
        .basis(i)?
        .get(pos)
        .ok_or_else(|| Error::OutOfRange(format!("basis position {pos} in V_{i}")))?;
    let (sign, t) = g.apply_subset(SubsetIndex::from_word(u));
    let k = f
        .position(i, &f.canonical(&t.to_word(n)))
        .ok_or_else(|| Error::NotAutomorphism("size not preserved".into()))?;
    Ok((k, sign))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A generator of the bilinear forms automorphisms. Matrices are row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearStep {
    /// `φ_x`: `χ_u ↦ χ_x(u) χ_u`, `x` of shape `d × e`.
    Translate(Vec<u32>),
    /// `λ_a`: `χ_u ↦ χ_{au}`, `a` invertible `d × d`.
    Left(Vec<u32>),
    /// `ρ_b`: `χ_u ↦ χ_{ub⁻¹}`, `b` invertible `e × e`.
    Right(Vec<u32>),
}

/// A composite of generator steps, applied in list order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BilinearAuto {
    pub q: u32,
    pub d: usize,
    pub e: usize,
    pub steps: Vec<BilinearStep>,
}

impl BilinearAuto {
    pub fn new(q: u32, d: usize, e: usize) -> Result<Self> {
        if !crate::groups::is_prime(q) {
            return Err(Error::InvalidParameter(format!("q = {q} is not prime")));
        }
        Ok(BilinearAuto { q, d, e, steps: Vec::new() })
    }

    /// Appends a step after validating its shape and invertibility.
    pub fn then(mut self, step: BilinearStep) -> Result<Self> {
        let (q, d, e) = (self.q, self.d, self.e);
        let check = |m: &[u32], len: usize, what: &str| -> Result<()> {
            if m.len() != len || m.iter().any(|&x| x >= q) {
                return Err(Error::InvalidParameter(format!("{what} must have {len} entries mod {q}")));
            }
            Ok(())
        };
        match &step {
            BilinearStep::Translate(x) => check(x, d * e, "translation")?,
            BilinearStep::Left(a) => {
                check(a, d * d, "left factor")?;
                fq::mat_inverse(a, d, q).ok_or_else(|| Error::InvalidParameter("left factor is singular".into()))?;
            }
            BilinearStep::Right(b) => {
                check(b, e * e, "right factor")?;
                fq::mat_inverse(b, e, q).ok_or_else(|| Error::InvalidParameter("right factor is singular".into()))?;
            }
        }
        self.steps.push(step);
        Ok(self)
    }

    pub fn translate(self, x: Vec<u32>) -> Result<Self> {
        self.then(BilinearStep::Translate(x))
    }

    pub fn left(self, a: Vec<u32>) -> Result<Self> {
        self.then(BilinearStep::Left(a))
    }

    pub fn right(self, b: Vec<u32>) -> Result<Self> {
        self.then(BilinearStep::Right(b))
    }

    pub fn apply_index(&self, u: &CharIndex) -> Result<(Cyclotomic, CharIndex)> {
        let (q, d, e) = (self.q, self.d, self.e);
        if u.len() != d * e || u.entries().iter().any(|&x| x >= q) {
            return Err(Error::NotInGroup(format!("{u:?} is not a {d}x{e} matrix over F_{q}")));
        }
        let mut coeff = Cyclotomic::one(q);
        let mut w = u.entries().to_vec();
        for step in &self.steps {
            match step {
                BilinearStep::Translate(x) => {
                    let k: u64 = x.iter().zip(&w).map(|(&a, &b)| a as u64 * b as u64).sum();
                    coeff = &coeff * &Cyclotomic::root_power(q, (k % q as u64) as i64);
                }
                BilinearStep::Left(a) => w = fq::mat_mul(a, &w, d, d, e, q),
                BilinearStep::Right(b) => {
                    let inv = fq::mat_inverse(b, e, q).expect("validated invertible");
                    w = fq::mat_mul(&w, &inv, d, e, e, q);
                }
            }
        }
        Ok((coeff, GroupElement::new(w)))
    }

    fn matches(&self, f: &FamilySpec) -> Result<()> {
        match f.kind() {
            FamilyKind::Bilinear { q, d, e } if (q, d, e) == (self.q, self.d, self.e) => Ok(()),
            other => Err(Error::InvalidParameter(format!(
                "bilinear action on H_{}({},{}) applied to {other}",
                self.q, self.d, self.e
            ))),
        }
    }

    pub fn basis_map(&self, f: &FamilySpec, i: usize) -> Result<BasisMap> {
        self.matches(f)?;
        action_map(f, i, |u| self.apply_index(u))
    }
}

pub fn apply_bilinear_auto(alpha: &BilinearAuto, f: &FamilySpec, i: usize, pos: usize) -> Result<(usize, Cyclotomic)> {
    alpha.matches(f)?;
    let u = f
        .basis(i)?
        .get(pos)
        .ok_or_else(|| Error::OutOfRange(format!("basis position {pos} in V_{i}")))?;
    let (c, v) = alpha.apply_index(u)?;
    let k = f.position(i, &v).ok_or_else(|| Error::NotAutomorphism("rank not preserved".into()))?;
    Ok((k, c))
}

/// A uniformly random invertible `n × n` matrix over `F_q`.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, q: u32, rng: &mut R) -> Vec<u32> {
    loop {
        let m: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..q)).collect();
        if fq::mat_inverse(&m, n, q).is_some() {
            return m;
        }
    }
}

/// Checks `ρ_b⁻¹ λ_a⁻¹ φ_x λ_a ρ_b = φ_{aᵀx(b⁻¹)ᵀ}` and `λ_a ρ_b = ρ_b λ_a` on
/// every basis vector of every eigenspace.
pub fn conjugation_identity_check(f: &FamilySpec, x: &[u32], a: &[u32], b: &[u32]) -> Result<bool> {
    let FamilyKind::Bilinear { q, d, e } = f.kind() else {
        return Err(Error::Unsupported(format!("conjugation identity on {}", f.kind())));
    };
    let a_inv = fq::mat_inverse(a, d, q).ok_or_else(|| Error::InvalidParameter("a is singular".into()))?;
    let b_inv = fq::mat_inverse(b, e, q).ok_or_else(|| Error::InvalidParameter("b is singular".into()))?;
    let conjugated = BilinearAuto::new(q, d, e)?
        .right(b.to_vec())?
        .left(a.to_vec())?
        .translate(x.to_vec())?
        .left(a_inv)?
        .right(b_inv.clone())?;
    let at_x = fq::mat_mul(&fq::transpose(a, d, d), x, d, d, e, q);
    let y = fq::mat_mul(&at_x, &fq::transpose(&b_inv, e, e), d, e, e, q);
    let direct = BilinearAuto::new(q, d, e)?.translate(y)?;
    let lr = BilinearAuto::new(q, d, e)?.left(a.to_vec())?.right(b.to_vec())?;
    let rl = BilinearAuto::new(q, d, e)?.right(b.to_vec())?.left(a.to_vec())?;
    for i in 0..f.dims().len() {
        for u in f.basis(i)? {
            if conjugated.apply_index(u)? != direct.apply_index(u)? || lr.apply_index(u)? != rl.apply_index(u)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub family: String,
    pub i: usize,
    pub enumerated: usize,
    pub kernel: Vec<HammingAuto>,
    /// The predicted kernel, when a prediction applies (`1 ≤ i`, and `i < n` for `e = 2`).
    pub expected: Option<Vec<HammingAuto>>,
}

impl KernelReport {
    pub fn matches(&self) -> Option<bool> {
        self.expected.as_ref().map(|x| x == &self.kernel)
    }
}

/// Enumerates every `(a, b, σ)` and keeps those acting trivially on `V_i`.
pub fn kernel_check_hamming(f: &FamilySpec, i: usize) -> Result<KernelReport> {
    let (n, e) = match f.kind() {
        FamilyKind::Hamming { n, e } => (n, e),
        FamilyKind::Hypercube { n } => (n, 2),
        other => return Err(Error::Unsupported(format!("kernel check on {other}"))),
    };
    if n > KERNEL_MAX_N || e > KERNEL_MAX_E {
        let size = (e as u128).pow(2 * n as u32) * (1..=n as u128).product::<u128>();
        return Err(Error::BudgetExceeded { needed: size, budget: 3u128.pow(6) * 6 });
    }
    let basis = f.basis(i)?;
    let units: Vec<u32> = (1..e).filter(|&x| gcd(x, e) == 1).collect();
    let words = |alphabet: &[u32]| -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| alphabet.iter().map(move |&x| [w.clone(), vec![x]].concat()))
                .collect();
        }
        out
    };
    let all: Vec<u32> = (0..e).collect();
    let mut kernel = Vec::new();
    let mut enumerated = 0;
    for a in words(&all) {
        for b in words(&units) {
            for sigma in permutations(n) {
                enumerated += 1;
                let phi = HammingAuto { n, e, a: a.clone(), b: b.clone(), sigma };
                let trivial = basis.iter().try_fold(true, |ok, u| -> Result<bool> {
                    let (c, v) = phi.apply_index(u)?;
                    Ok(ok && c.is_one() && &v == u)
                })?;
                if trivial {
                    kernel.push(phi);
                }
            }
        }
    }
    let id = HammingAuto::identity(n, e);
    let expected = if i == 0 || (e == 2 && i >= n) {
        None
    } else if e == 2 && i.is_multiple_of(2) {
        Some(vec![id, HammingAuto { a: vec![1; n], ..HammingAuto::identity(n, e) }])
    } else {
        Some(vec![id])
    };
    Ok(KernelReport { family: f.kind().to_string(), i, enumerated, kernel, expected })
}

/// The map on `V_1(H(1,e))` induced by `η_j ↦ η_{π(j)}`, written in the
/// character basis via `χ_k = ((e−2)/e) Σ_j ω^{−jk} η_j`.
pub fn eta_permutation_map(e: u32, pi: &[usize]) -> Result<BasisMap> {
    check_permutation(pi, e as usize)?;
    let etas = (0..e).map(|j| eta(e, j).map(|x| x.vector)).collect::<Result<Vec<_>>>()?;
    let scale = Rational::new((e as i64 - 2).into(), (e as i64).into());
    // basis position p holds χ_{p+1}
    let images = (1..e)
        .map(|k| {
            let mut acc = AlgebraVector::zero(1, e as usize - 1, e);
            for j in 0..e {
                let w = Cyclotomic::root_power(e, -(j as i64) * k as i64);
                acc = acc.checked_add(&etas[pi[j as usize]].scale(&w))?;
            }
            Ok(acc.scale_rational(&scale))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisMap::new(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(v: &[u32]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn hamming_action_examples() {
        let f = make_family(FamilyKind::Hamming { n: 1, e: 3 }).unwrap();
        let phi = HammingAuto::new(1, 3, vec![1], vec![1], vec![0]).unwrap();
        assert_eq!(phi.apply_index(&word(&[1])).unwrap(), (Cyclotomic::root_power(3, 1), word(&[1])));
        assert_eq!(phi.apply_index(&word(&[2])).unwrap(), (Cyclotomic::root_power(3, 2), word(&[2])));
        let id = HammingAuto::identity(1, 3);
        assert_eq!(apply_hamming_auto(&id, &f, 1, 1).unwrap(), (1, Cyclotomic::one(3)));
        assert!(HammingAuto::new(1, 4, vec![0], vec![2], vec![0]).is_err());
        let q = make_family(FamilyKind::Hypercube { n: 4 }).unwrap();
        let flip = HammingAuto::new(4, 2, vec![1; 4], vec![1; 4], (0..4).collect()).unwrap();
        for pos in 0..q.dim(2).unwrap() {
            assert_eq!(apply_hamming_auto(&flip, &q, 2, pos).unwrap(), (pos, Cyclotomic::one(2)));
        }
    }

    #[test]
    fn composition_examples() {
        let phi = HammingAuto::new(1, 3, vec![1], vec![1], vec![0]).unwrap();
        assert_eq!(phi.compose(&phi).unwrap(), HammingAuto::new(1, 3, vec![2], vec![1], vec![0]).unwrap());
        let s = HammingAuto::new(3, 2, vec![0; 3], vec![1; 3], vec![1, 2, 0]).unwrap();
        let t = HammingAuto::new(3, 2, vec![0; 3], vec![1; 3], vec![1, 0, 2]).unwrap();
        assert_eq!(s.compose(&t).unwrap().sigma, vec![2, 1, 0]);
        assert_eq!(s.compose(&HammingAuto::identity(3, 2)).unwrap(), s);
    }

    #[test]
    fn composite_action_is_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = make_family(FamilyKind::Hamming { n: 3, e: 4 }).unwrap();
        for _ in 0..50 {
            let p = HammingAuto::random(3, 4, &mut rng);
            let r = HammingAuto::random(3, 4, &mut rng);
            let pr = p.compose(&r).unwrap();
            for u in f.basis(2).unwrap() {
                let (c1, v1) = r.apply_index(u).unwrap();
                let (c2, v2) = p.apply_index(&v1).unwrap();
                assert_eq!(pr.apply_index(u).unwrap(), (&c1 * &c2, v2));
            }
        }
    }

    #[test]
    fn hamming_actions_are_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = make_family(FamilyKind::Hamming { n: 2, e: 3 }).unwrap();
        for _ in 0..50 {
            let phi = HammingAuto::random(2, 3, &mut rng);
            assert!(is_algebra_automorphism(&phi.basis_map(&f, 1).unwrap(), &f, 1).unwrap());
        }
    }

    #[test]
    fn signed_permutation_examples() {
        let q3 = make_family(FamilyKind::Hypercube { n: 3 }).unwrap();
        let swap = SignedPermutation::new(vec![1, 0, 2], vec![1; 3]).unwrap();
        let from = q3.position(2, &SubsetIndex::from_elements(&[1, 3]).to_word(3)).unwrap();
        let to = q3.position(2, &SubsetIndex::from_elements(&[2, 3]).to_word(3)).unwrap();
        assert_eq!(apply_signed_perm(&swap, &q3, 2, from).unwrap(), (to, 1));

        let h6 = make_family(FamilyKind::HalvedCube { n: 6 }).unwrap();
        let bad = SignedPermutation::new((0..6).collect(), vec![-1, 1, 1, 1, 1, 1]).unwrap();
        assert!(!bad.is_type_d());
        assert!(bad.basis_map(&h6, 2).is_err());
        assert!(!is_algebra_automorphism(&bad.basis_map_unchecked(&h6, 2).unwrap(), &h6, 2).unwrap());

        let h5 = make_family(FamilyKind::HalvedCube { n: 5 }).unwrap();
        let all = SignedPermutation::all_type_d(5);
        assert_eq!(all.len(), 1920);
        let t = MonomialTable::from_family(&h5, 1).unwrap();
        for g in &all {
            assert!(is_table_automorphism(&g.basis_map(&h5, 1).unwrap(), &t).unwrap());
        }
    }

    #[test]
    fn bilinear_examples() {
        let f = make_family(FamilyKind::Bilinear { q: 2, d: 2, e: 2 }).unwrap();
        let x = BilinearAuto::new(2, 2, 2).unwrap().translate(vec![1, 0, 0, 0]).unwrap();
        for i in 0..=2 {
            for u in f.basis(i).unwrap() {
                let sign = if u.entries()[0] == 1 { -1 } else { 1 };
                assert_eq!(x.apply_index(u).unwrap(), (Cyclotomic::from_integer(2, sign), u.clone()));
            }
            assert!(is_algebra_automorphism(&x.basis_map(&f, i).unwrap(), &f, i).unwrap());
        }
        assert!(BilinearAuto::new(2, 2, 2).unwrap().left(vec![1, 1, 1, 1]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_invertible(2, 2, &mut rng);
        let b = random_invertible(2, 2, &mut rng);
        assert!(conjugation_identity_check(&f, &[0, 1, 1, 1], &a, &b).unwrap());
        let g = BilinearAuto::new(2, 2, 2).unwrap().left(a).unwrap().right(b).unwrap();
        for i in 0..=2 {
            assert!(is_algebra_automorphism(&g.basis_map(&f, i).unwrap(), &f, i).unwrap());
        }
    }

    #[test]
    fn kernels() {
        let h23 = make_family(FamilyKind::Hamming { n: 2, e: 3 }).unwrap();
        let r = kernel_check_hamming(&h23, 1).unwrap();
        assert_eq!(r.kernel, vec![HammingAuto::identity(2, 3)]);
        assert_eq!(r.matches(), Some(true));
        let q3 = make_family(FamilyKind::Hypercube { n: 3 }).unwrap();
        let r = kernel_check_hamming(&q3, 2).unwrap();
        assert_eq!(r.kernel.len(), 2);
        assert_eq!(r.matches(), Some(true));
        assert_eq!(kernel_check_hamming(&q3, 1).unwrap().matches(), Some(true));
        let big = make_family(FamilyKind::Hamming { n: 4, e: 3 }).unwrap();
        assert!(kernel_check_hamming(&big, 1).is_err());
    }

    #[test]
    fn eta_permutations_are_automorphisms() {
        for e in 3..=5 {
            let t = MonomialTable::from_family(&make_family(FamilyKind::Hamming { n: 1, e }).unwrap(), 1).unwrap();
            for pi in permutations(e as usize) {
                let m = eta_permutation_map(e, &pi).unwrap();
                assert!(is_table_automorphism(&m, &t).unwrap(), "e = {e}, pi = {pi:?}");
            }
        }
    }

    #[test]
    fn verifier_rejects_non_bijections() {
        let t = MonomialTable::from_family(&make_family(FamilyKind::Hamming { n: 1, e: 3 }).unwrap(), 1).unwrap();
        let one = Cyclotomic::one(3);
        let collapse = BasisMap::monomial(&t, &[(0, one.clone()), (0, one.clone())]).unwrap();
        assert!(!is_table_automorphism(&collapse, &t).unwrap());
        let short = BasisMap::monomial(&t, &[(0, one)]).unwrap();
        assert!(is_table_automorphism(&short, &t).is_err());
        assert!(is_table_automorphism(&BasisMap::identity(&t), &t).unwrap());
    }
}
