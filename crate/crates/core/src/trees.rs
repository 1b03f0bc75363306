//! Parenthesizations as full binary trees, and associative spectra of binary
//! operations.
//!
//! Two parenthesizations of a bilinear product agree as multilinear maps iff
//! they agree on every tuple of basis vectors, so counting distinct basis-tuple
//! fingerprints gives the exact class count.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norton::{AlgebraVector, MonomialTable};

pub const DEFAULT_MAX_M: usize = 12;
pub const DEFAULT_EVALUATION_BUDGET: u128 = 10_000_000;
pub const DEFAULT_WITNESS_ATTEMPTS: usize = 10_000;
// Cost cap for one exhaustive palette in witness mode.
const PALETTE_BUDGET: u128 = 2_000_000;
// Largest generator closure used for top-down witness sampling.
const CLOSURE_CAP: usize = 256;

/// A binary operation on hashable values.
pub trait BinaryOp: Sync {
    type Value: Clone + Eq + Hash + Send + Sync;
    fn apply(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

impl BinaryOp for MonomialTable {
    type Value = AlgebraVector;
    fn apply(&self, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
        self.product(a, b).expect("operands belong to this algebra")
    }
}

/// `a ⊖ b = −a − b` on integer linear forms in the leaf indeterminates.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleMinus;

impl BinaryOp for DoubleMinus {
    type Value = Vec<i64>;
    fn apply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| -x - y).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Shape {
    Leaf,
    Node(Arc<BinaryTree>, Arc<BinaryTree>),
}

/// A full binary tree; its leaves are the operands left to right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    shape: Shape,
    depths: Vec<u32>,
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree { shape: Shape::Leaf, depths: vec![0] }
    }

    pub fn join(left: Arc<BinaryTree>, right: Arc<BinaryTree>) -> Self {
        let depths = left.depths.iter().chain(&right.depths).map(|d| d + 1).collect();
        BinaryTree { shape: Shape::Node(left, right), depths }
    }

    pub fn leaf_count(&self) -> usize {
        self.depths.len()
    }

    /// Leaf depths, left to right.
    pub fn depth_sequence(&self) -> &[u32] {
        &self.depths
    }

    pub fn children(&self) -> Option<(&Arc<BinaryTree>, &Arc<BinaryTree>)> {
        match &self.shape {
            Shape::Leaf => None,
            Shape::Node(l, r) => Some((l, r)),
        }
    }

    /// Rebuilds a tree from its depth sequence, if it is one.
    pub fn from_depths(depths: &[u32]) -> Option<Self> {
        fn build(ds: &[u32], level: u32) -> Option<BinaryTree> {
            if ds.len() == 1 {
                return (ds[0] == level).then(BinaryTree::leaf);
            }
            // The left subtree is the shortest prefix whose leaves fill a
            // full tree at depth level + 1.
            let mut weight = 0f64;
            for k in 0..ds.len() - 1 {
                if ds[k] <= level {
                    return None;
                }
                weight += 0.5f64.powi((ds[k] - level - 1) as i32);
                if weight == 1.0 {
                    let l = build(&ds[..=k], level + 1)?;
                    let r = build(&ds[k + 1..], level + 1)?;
                    return Some(BinaryTree::join(Arc::new(l), Arc::new(r)));
                }
                if weight > 1.0 {
                    return None;
                }
            }
            None
        }
        if depths.is_empty() || depths.iter().any(|&d| d > 60) {
            return None;
        }
        build(depths, 0)
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &BinaryTree, next: &mut usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &t.shape {
                Shape::Leaf => {
                    write!(f, "z{next}")?;
                    *next += 1;
                    Ok(())
                }
                Shape::Node(l, r) => {
                    write!(f, "(")?;
                    go(l, next, f)?;
                    write!(f, "*")?;
                    go(r, next, f)?;
                    write!(f, ")")
                }
            }
        }
        go(self, &mut 0, f)
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} {:?}", self.depths)
    }
}

pub fn catalan(m: usize) -> u128 {
    (0..m).fold(1u128, |c, k| c * 2 * (2 * k as u128 + 1) / (k as u128 + 2))
}

/// All full binary trees with `m + 1` leaves, ordered by left-subtree size
/// (largest first), then by left subtree, then by right subtree.
pub fn enumerate_trees(m: usize) -> Result<Vec<Arc<BinaryTree>>> {
    enumerate_trees_with_max(m, DEFAULT_MAX_M)
}

pub fn enumerate_trees_with_max(m: usize, max_m: usize) -> Result<Vec<Arc<BinaryTree>>> {
    if m > max_m {
        return Err(Error::BudgetExceeded { needed: m as u128, budget: max_m as u128 });
    }
    let mut by_leaves: Vec<Vec<Arc<BinaryTree>>> = vec![Vec::new(), vec![Arc::new(BinaryTree::leaf())]];
    for k in 2..=m + 1 {
        let mut level = Vec::with_capacity(catalan(k - 1) as usize);
        for left in (1..k).rev() {
            for l in &by_leaves[left] {
                for r in &by_leaves[k - left] {
                    level.push(Arc::new(BinaryTree::join(l.clone(), r.clone())));
                }
            }
        }
        by_leaves.push(level);
    }
    Ok(by_leaves.swap_remove(m + 1))
}

/// Evaluates the parenthesization on the given operands.
pub fn evaluate<O: BinaryOp>(t: &BinaryTree, op: &O, inputs: &[O::Value]) -> Result<O::Value> {
    if inputs.len() != t.leaf_count() {
        return Err(Error::LengthMismatch { expected: t.leaf_count(), found: inputs.len() });
    }
    fn go<O: BinaryOp>(t: &BinaryTree, op: &O, inputs: &[O::Value]) -> O::Value {
        match &t.shape {
            Shape::Leaf => inputs[0].clone(),
            Shape::Node(l, r) => {
                let k = l.leaf_count();
                op.apply(&go(l, op, &inputs[..k]), &go(r, op, &inputs[k..]))
            }
        }
    }
    Ok(go(t, op, inputs))
}

/// Depth sequence mod 2; trees are ⊖-equivalent iff these agree.
pub fn ominus_class(t: &BinaryTree) -> Vec<u8> {
    t.depths.iter().map(|d| (d % 2) as u8).collect()
}

/// The linear form `(z_0 ⊖ ⋯ ⊖ z_m)_t`, computed by symbolic evaluation.
pub fn ominus_form(t: &BinaryTree) -> Vec<i64> {
    let n = t.leaf_count();
    let leaves: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|k| (j == k) as i64).collect())
        .collect();
    evaluate(t, &DoubleMinus, &leaves).expect("one indeterminate per leaf")
}

/// `⌊2^{m+1}/3⌋`, the number of ⊖ classes for `m ≥ 1`.
pub fn a000975(m: usize) -> Result<u128> {
    if m == 0 {
        return Err(Error::InvalidParameter("the A000975 count applies for m >= 1 only".into()));
    }
    if m > 120 {
        return Err(Error::OutOfRange(format!("m = {m} overflows")));
    }
    Ok((1u128 << (m + 1)) / 3)
}

/// Number of distinct ⊖ linear forms over all trees with `m + 1` leaves.
pub fn ominus_class_count(m: usize) -> Result<usize> {
    let forms: std::collections::HashSet<Vec<i64>> =
        enumerate_trees(m)?.iter().map(|t| ominus_form(t)).collect();
    Ok(forms.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    Exact,
    WitnessLowerBound,
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Exact => "exact",
            CountMode::WitnessLowerBound => "witness-lower-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub m: usize,
    pub catalan: u128,
    pub class_count: usize,
    pub mode: CountMode,
    /// Operand tuples evaluated.
    pub budget_used: u128,
    pub seed: Option<u64>,
    /// Class label of each tree, in enumeration order.
    #[serde(skip)]
    pub classes: Vec<u32>,
}

struct Arena<'a, O: BinaryOp> {
    op: &'a O,
    values: Vec<O::Value>,
    ids: HashMap<O::Value, u32>,
    memo: HashMap<(u32, u32), u32>,
}

impl<'a, O: BinaryOp> Arena<'a, O> {
    fn new(op: &'a O) -> Self {
        Arena { op, values: Vec::new(), ids: HashMap::new(), memo: HashMap::new() }
    }

    fn intern(&mut self, v: &O::Value) -> u32 {
        if let Some(&id) = self.ids.get(v) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(v.clone());
        self.ids.insert(v.clone(), id);
        id
    }

    fn apply(&mut self, a: u32, b: u32) -> u32 {
        if let Some(&c) = self.memo.get(&(a, b)) {
            return c;
        }
        let v = self.op.apply(&self.values[a as usize], &self.values[b as usize]);
        let c = self.intern(&v);
        self.memo.insert((a, b), c);
        c
    }

    /// Results of `t` on every tuple from `leaves`, lexicographically indexed.
    fn fingerprint(
        &mut self,
        t: &BinaryTree,
        leaves: &[u32],
        cache: &mut HashMap<Vec<u32>, Arc<Vec<u32>>>,
    ) -> Arc<Vec<u32>> {
        if let Some(fp) = cache.get(&t.depths) {
            return fp.clone();
        }
        let fp = match &t.shape {
            Shape::Leaf => leaves.to_vec(),
            Shape::Node(l, r) => {
                let fl = self.fingerprint(l, leaves, cache);
                let fr = self.fingerprint(r, leaves, cache);
                let mut out = Vec::with_capacity(fl.len() * fr.len());
                for &a in fl.iter() {
                    for &b in fr.iter() {
                        out.push(self.apply(a, b));
                    }
                }
                out
            }
        };
        let fp = Arc::new(fp);
        cache.insert(t.depths.clone(), fp.clone());
        fp
    }

    fn eval(&mut self, t: &BinaryTree, leaves: &[u32]) -> u32 {
        match &t.shape {
            Shape::Leaf => leaves[0],
            Shape::Node(l, r) => {
                let k = l.leaf_count();
                let a = self.eval(l, &leaves[..k]);
                let b = self.eval(r, &leaves[k..]);
                self.apply(a, b)
            }
        }
    }
}

/// Relabels classes so they are numbered by first appearance.
fn refine<K: Hash + Eq>(classes: &mut [u32], keys: impl Iterator<Item = K>) {
    let mut seen: HashMap<(u32, K), u32> = HashMap::new();
    for (c, k) in classes.iter_mut().zip(keys) {
        let next = seen.len() as u32;
        *c = *seen.entry((*c, k)).or_insert(next);
    }
}

fn class_count(classes: &[u32]) -> usize {
    classes.iter().copied().max().map_or(0, |c| c as usize + 1)
}

/// Exact associative spectrum on basis tuples.
pub fn count_classes_exact<O: BinaryOp>(
    op: &O,
    basis: &[O::Value],
    m: usize,
    budget: u128,
) -> Result<SpectrumReport> {
    let trees = enumerate_trees(m)?;
    let tuples = (basis.len() as u128).checked_pow(m as u32 + 1).unwrap_or(u128::MAX);
    let needed = tuples.saturating_mul(catalan(m));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut arena = Arena::new(op);
    let leaves: Vec<u32> = basis.iter().map(|b| arena.intern(b)).collect();
    let mut cache = HashMap::new();
    let fps: Vec<Arc<Vec<u32>>> = trees.iter().map(|t| arena.fingerprint(t, &leaves, &mut cache)).collect();
    let mut classes = vec![0u32; trees.len()];
    refine(&mut classes, fps.iter().cloned());
    Ok(SpectrumReport {
        m,
        catalan: catalan(m),
        class_count: class_count(&classes),
        mode: CountMode::Exact,
        budget_used: tuples,
        seed: None,
        classes,
    })
}

/// Lower bound on the associative spectrum from seeded witness search.
///
/// Two phases share one partition of the trees. First, seeded random
/// palettes (small subsets of the generators) are evaluated on every tuple
/// drawn from the palette. Then, for up to `attempts` rounds, every class
/// with more than one tree gets a fresh seeded tuple evaluated on all its
/// members, so each unresolved pair sees `attempts` candidate witnesses. Trees end in different classes
/// only when some tuple separates them, so the count is always a lower bound,
/// and equals `C_m` exactly when every pair was separated.
pub fn count_classes_witness<O: BinaryOp>(
    op: &O,
    generators: &[O::Value],
    m: usize,
    seed: u64,
    attempts: usize,
) -> Result<SpectrumReport> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("empty generator set".into()));
    }
    let trees = enumerate_trees(m)?;
    let total = trees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arena = Arena::new(op);
    let gens: Vec<u32> = generators.iter().map(|g| arena.intern(g)).collect();
    let mut classes = vec![0u32; total];
    let mut used: u128 = 0;

    // Phase 1: exhaustive tuples over seeded palettes.
    let mut size = gens.len().min(4);
    while size > 1 && (size as u128).pow(m as u32 + 1) * catalan(m) > PALETTE_BUDGET {
        size -= 1;
    }
    if size >= 1 && (size as u128).pow(m as u32 + 1) * catalan(m) <= PALETTE_BUDGET {
        let mut palettes = 0;
        while class_count(&classes) < total && palettes < attempts {
            let mut palette = gens.clone();
            palette.shuffle(&mut rng);
            palette.truncate(size);
            let mut cache = HashMap::new();
            let fps: Vec<Arc<Vec<u32>>> =
                trees.iter().map(|t| arena.fingerprint(t, &palette, &mut cache)).collect();
            refine(&mut classes, fps.into_iter());
            used += (size as u128).pow(m as u32 + 1);
            palettes += 1;
            if palettes >= palette_limit(gens.len(), size) {
                break;
            }
        }
    }

    // Phase 2: each attempt draws one tuple per unresolved class and
    // evaluates every member of that class on it. When the generators close
    // up under the operation, tuples are drawn top-down from recorded
    // products so that a randomly chosen member evaluates nontrivially.
    let sampler = Sampler::new(&mut arena, &gens);
    for _ in 0..attempts {
        let count = class_count(&classes);
        if count == total {
            break;
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (k, &c) in classes.iter().enumerate() {
            members[c as usize].push(k);
        }
        let mut results = vec![u32::MAX; total];
        for group in members.iter().filter(|g| g.len() > 1) {
            let pivot = &trees[group[rng.gen_range(0..group.len())]];
            let drawn = sampler.as_ref().and_then(|s| s.draw(pivot, &mut rng));
            let tuple = drawn.unwrap_or_else(|| uniform_tuple(&gens, m + 1, &mut rng));
            for &k in group {
                results[k] = arena.eval(&trees[k], &tuple);
            }
            used += 1;
        }
        refine(&mut classes, results.into_iter());
    }

    let count = class_count(&classes);
    Ok(SpectrumReport {
        m,
        catalan: catalan(m),
        class_count: count,
        mode: if count == total { CountMode::Exact } else { CountMode::WitnessLowerBound },
        budget_used: used,
        seed: Some(seed),
        classes,
    })
}

fn uniform_tuple<R: Rng>(gens: &[u32], len: usize, rng: &mut R) -> Vec<u32> {
    let k = rng.gen_range(1..=gens.len().min(len));
    let palette: Vec<u32> = gens.choose_multiple(rng, k).copied().collect();
    (0..len).map(|_| palette[rng.gen_range(0..palette.len())]).collect()
}

/// Preimages of every product among the closure of the generators.
struct Sampler {
    preimages: BTreeMap<u32, Vec<(u32, u32)>>,
    targets: Vec<u32>,
    generators: HashSet<u32>,
}

impl Sampler {
    fn new<O: BinaryOp>(arena: &mut Arena<'_, O>, gens: &[u32]) -> Option<Self> {
        let generators: HashSet<u32> = gens.iter().copied().collect();
        let mut closure: Vec<u32> = Vec::new();
        let mut seen = HashSet::new();
        for &g in gens {
            if seen.insert(g) {
                closure.push(g);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            let n = closure.len();
            for a in 0..n {
                for b in 0..n {
                    let c = arena.apply(closure[a], closure[b]);
                    if seen.insert(c) {
                        closure.push(c);
                        changed = true;
                        if closure.len() > CLOSURE_CAP {
                            return None;
                        }
                    }
                }
            }
        }
        let mut preimages: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
        for &a in &closure {
            for &b in &closure {
                preimages.entry(arena.apply(a, b)).or_default().push((a, b));
            }
        }
        let targets = preimages.keys().copied().collect();
        Some(Sampler { preimages, targets, generators })
    }

    fn draw<R: Rng>(&self, t: &BinaryTree, rng: &mut R) -> Option<Vec<u32>> {
        for _ in 0..16 {
            let target = self.targets[rng.gen_range(0..self.targets.len())];
            let mut out = Vec::with_capacity(t.leaf_count());
            if self.fill(t, target, rng, &mut out) {
                return Some(out);
            }
        }
        None
    }

    fn fill<R: Rng>(&self, t: &BinaryTree, value: u32, rng: &mut R, out: &mut Vec<u32>) -> bool {
        match &t.shape {
            Shape::Leaf => {
                out.push(value);
                self.generators.contains(&value)
            }
            Shape::Node(l, r) => {
                let Some(pre) = self.preimages.get(&value) else { return false };
                let (a, b) = pre[rng.gen_range(0..pre.len())];
                self.fill(l, a, rng, out) && self.fill(r, b, rng, out)
            }
        }
    }
}

// Number of distinct palettes worth trying: all of them when there are few.
fn palette_limit(n: usize, k: usize) -> usize {
    let c = crate::families::binom(n, k);
    (4 * c).min(usize::MAX as u128) as usize
}

/// Whether the exact class partition equals the ⊖ depth-parity partition.
pub fn ominus_equivalence_check<O: BinaryOp>(
    op: &O,
    basis: &[O::Value],
    m: usize,
    budget: u128,
) -> Result<bool> {
    let report = count_classes_exact(op, basis, m, budget)?;
    let trees = enumerate_trees(m)?;
    let mut parity = vec![0u32; trees.len()];
    refine(&mut parity, trees.iter().map(|t| ominus_class(t)));
    // Both labelings number classes by first appearance, so equal partitions
    // give identical label vectors.
    Ok(parity == report.classes)
}
