//! Cayley graphs of finite abelian groups and their character spectra.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{CharIndex, Group, GroupElement};

/// `Γ(X, S)` over a vertex set `X` that is a subgroup of `group`.
///
/// `characters` lists one index per distinct character of `X`; for proper
/// subgroups distinct indices of the ambient group may restrict to the same
/// character, and only one representative is kept.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    group: Group,
    vertices: Vec<GroupElement>,
    characters: Vec<CharIndex>,
    connection: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    /// Distinct eigenvalues in descending order with multiplicities.
    pub pairs: Vec<(Cyclotomic, usize)>,
}

impl Spectrum {
    /// The eigenvalues as machine integers.
    pub fn integers(&self) -> Vec<(i64, usize)> {
        self.pairs
            .iter()
            .map(|(v, m)| (v.to_integer().and_then(|z| z.to_i64()).expect("integral eigenvalue"), *m))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m).sum()
    }
}

impl CayleyGraph {
    pub fn new(
        group: Group,
        vertices: Vec<GroupElement>,
        characters: Vec<CharIndex>,
        connection: Vec<GroupElement>,
    ) -> Result<Self> {
        let index: HashMap<GroupElement, usize> =
            vertices.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidParameter("duplicate vertices".into()));
        }
        let mut seen = HashSet::new();
        for s in &connection {
            if s.is_zero() {
                return Err(Error::InvalidParameter("connection set contains 0".into()));
            }
            if !index.contains_key(s) {
                return Err(Error::InvalidParameter(format!("{} is not a vertex", group.format(s))));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::InvalidParameter(format!("duplicate generator {}", group.format(s))));
            }
        }
        for s in &connection {
            if !seen.contains(&group.neg(s)?) {
                return Err(Error::InvalidParameter(format!(
                    "connection set is not symmetric at {}",
                    group.format(s)
                )));
            }
        }
        if characters.len() != vertices.len() {
            return Err(Error::InvalidParameter(format!(
                "{} characters for {} vertices",
                characters.len(),
                vertices.len()
            )));
        }
        Ok(CayleyGraph { group, vertices, characters, connection, index })
    }

    /// `Γ(G, S)` on the whole group, with every element indexing a character.
    pub fn on_group(group: Group, connection: Vec<GroupElement>, budget: u128) -> Result<Self> {
        let vertices = group.enumerate(budget)?;
        let characters = vertices.clone();
        Self::new(group, vertices, characters, connection)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn characters(&self) -> &[CharIndex] {
        &self.characters
    }

    pub fn connection(&self) -> &[GroupElement] {
        &self.connection
    }

    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    /// `χ_u(S) = Σ_{s∈S} χ_u(s)`.
    pub fn eigenvalue_of_character(&self, u: &CharIndex) -> Cyclotomic {
        let e = self.group.modulus();
        let mut counts = vec![0i64; e as usize];
        for s in &self.connection {
            counts[self.group.pairing(u, s) as usize] += 1;
        }
        Cyclotomic::from_power_counts(e, &counts)
    }

    /// Groups the characters by eigenvalue. Fails if an eigenvalue is not a
    /// rational integer, which cannot happen for a symmetric connection set.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut by_value: BTreeMap<i64, (Cyclotomic, usize)> = BTreeMap::new();
        for u in &self.characters {
            let theta = self.eigenvalue_of_character(u);
            let z = theta
                .to_integer()
                .and_then(|z| z.to_i64())
                .ok_or_else(|| Error::Unsupported(format!("non-integral eigenvalue {theta}")))?;
            by_value.entry(z).or_insert((theta, 0)).1 += 1;
        }
        Ok(Spectrum { pairs: by_value.into_values().rev().collect() })
    }

    /// Applies the adjacency operator to the value table of `χ_u` and checks
    /// that the result is `χ_u(S)·χ_u` at every vertex.
    pub fn verify_eigenvector(&self, u: &CharIndex) -> bool {
        let e = self.group.modulus();
        let theta = self.eigenvalue_of_character(u);
        let scaled: Vec<Cyclotomic> =
            (0..e as i64).map(|k| &theta * &Cyclotomic::root_power(e, k)).collect();
        let table: Vec<u32> = self.vertices.iter().map(|x| self.group.pairing(u, x)).collect();
        let mut counts = vec![0i64; e as usize];
        for (k, x) in self.vertices.iter().enumerate() {
            counts.iter_mut().for_each(|c| *c = 0);
            for s in &self.connection {
                let Ok(y) = self.group.add(x, s) else { return false };
                let Some(&j) = self.index.get(&y) else { return false };
                counts[table[j] as usize] += 1;
            }
            if Cyclotomic::from_power_counts(e, &counts) != scaled[table[k] as usize] {
                return false;
            }
        }
        true
    }

    /// [`verify_eigenvector`](Self::verify_eigenvector) for every character, in parallel.
    pub fn verify_all_eigenvectors(&self) -> bool {
        self.characters.par_iter().all(|u| self.verify_eigenvector(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight_one(group: &Group) -> Vec<GroupElement> {
        let e = group.modulus();
        let n = group.rank();
        let mut out = Vec::new();
        for j in 0..n {
            for a in 1..e {
                let mut w = vec![0; n];
                w[j] = a;
                out.push(GroupElement::new(w));
            }
        }
        out
    }

    fn hamming(n: usize, e: u32) -> CayleyGraph {
        let g = Group::word(n, e).unwrap();
        CayleyGraph::on_group(g, weight_one(&g), 1 << 16).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let h = hamming(2, 3);
        let g = *h.group();
        assert_eq!(h.eigenvalue_of_character(&g.parse("10").unwrap()), Cyclotomic::from_integer(3, 1));
        assert_eq!(h.eigenvalue_of_character(&g.parse("00").unwrap()), Cyclotomic::from_integer(3, 4));
        assert_eq!(h.eigenvalue_of_character(&g.parse("11").unwrap()), Cyclotomic::from_integer(3, -2));
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(hamming(2, 3).spectrum().unwrap().integers(), vec![(4, 1), (1, 4), (-2, 4)]);
        assert_eq!(
            hamming(3, 2).spectrum().unwrap().integers(),
            vec![(3, 1), (1, 3), (-1, 3), (-3, 1)]
        );
        assert_eq!(hamming(1, 2).spectrum().unwrap().integers(), vec![(1, 1), (-1, 1)]);
    }

    #[test]
    fn eigenvectors_verify() {
        let h = hamming(2, 3);
        assert!(h.verify_eigenvector(&h.group().parse("10").unwrap()));
        assert!(h.verify_all_eigenvectors());
    }

    #[test]
    fn invalid_connection_sets() {
        let g = Group::word(2, 3).unwrap();
        let one = |s: &str| vec![g.parse(s).unwrap()];
        assert!(CayleyGraph::on_group(g, one("00"), 100).is_err());
        assert!(CayleyGraph::on_group(g, one("10"), 100).is_err());
        let dup = vec![g.parse("10").unwrap(), g.parse("20").unwrap(), g.parse("10").unwrap()];
        assert!(CayleyGraph::on_group(g, dup, 100).is_err());
    }

    #[test]
    fn proper_subgroup_vertex_set() {
        // even-weight words of Z_2^2: a single edge
        let g = Group::word(2, 2).unwrap();
        let verts = vec![g.parse("00").unwrap(), g.parse("11").unwrap()];
        let conn = vec![g.parse("11").unwrap()];
        let chars = vec![g.parse("00").unwrap(), g.parse("10").unwrap()];
        let graph = CayleyGraph::new(g, verts, chars, conn).unwrap();
        assert!(graph.verify_all_eigenvectors());
        assert_eq!(graph.spectrum().unwrap().integers(), vec![(1, 1), (-1, 1)]);
    }
}
