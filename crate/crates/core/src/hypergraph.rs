//! k-uniform hypergraphs on the vertex set `0..n`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::combinatorics::{binomial, combinations, mask_of};
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone)]
enum EdgeLookup {
    /// Edge masks, used when `n <= 64`.
    Small(HashSet<u64>),
    Large(HashSet<Vec<usize>>),
}

/// An immutable k-uniform hypergraph.
///
/// Edges are kept sorted ascending, both individually and as a list, so that
/// iteration order is reproducible; a hash index answers membership queries.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    lookup: EdgeLookup,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

/// The result of [`Hypergraph::induced`]: vertex `i` of `graph` is vertex
/// `vertex_map[i]` of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Hypergraph,
    pub vertex_map: Vec<usize>,
}

impl InducedSubgraph {
    pub fn to_parent(&self, local: &VertexSet) -> VertexSet {
        local.iter().map(|v| self.vertex_map[v]).collect()
    }
}

impl Hypergraph {
    /// Builds a hypergraph, validating every edge. Edges may be given in any
    /// vertex order; duplicates are rejected.
    pub fn new<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if k < 2 {
            return Err(Error::BadUniformity(k));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            if e.len() != k {
                return Err(Error::EdgeArity { len: e.len(), edge: e, k });
            }
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(e));
            }
            if !set.insert(e.clone()) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        Ok(Self::from_canonical(n, k, set.into_iter().collect()))
    }

    /// Edges must already be sorted, distinct, in range and in sorted order.
    pub(crate) fn from_canonical(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let lookup = if n <= 64 {
            EdgeLookup::Small(edges.iter().map(|e| mask_of(e)).collect())
        } else {
            EdgeLookup::Large(edges.iter().cloned().collect())
        };
        Hypergraph { n, k, edges, lookup }
    }

    /// Builds from an arbitrary collection of k-subsets, silently merging
    /// duplicates. Panics on malformed input; for generated graphs only.
    pub(crate) fn from_sets<I>(n: usize, k: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let set: BTreeSet<Vec<usize>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                assert!(e.len() == k && e.iter().all(|&v| v < n));
                e
            })
            .collect();
        Self::from_canonical(n, k, set.into_iter().collect())
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty())
    }

    pub fn complete(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadUniformity(k));
        }
        let all: Vec<usize> = (0..n).collect();
        Ok(Self::from_canonical(n, k, combinations(&all, k).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Membership test; `vertices` may be in any order.
    pub fn has_edge(&self, vertices: &[usize]) -> bool {
        if vertices.len() != self.k {
            return false;
        }
        match &self.lookup {
            EdgeLookup::Small(set) => {
                if vertices.iter().any(|&v| v >= 64) {
                    return false;
                }
                let m = mask_of(vertices);
                m.count_ones() as usize == self.k && set.contains(&m)
            }
            EdgeLookup::Large(set) => {
                let mut e = vertices.to_vec();
                e.sort_unstable();
                set.contains(&e)
            }
        }
    }

    /// Membership test for an edge given as a bitmask (only meaningful for
    /// `n <= 64`).
    pub fn has_edge_mask(&self, mask: u64) -> bool {
        match &self.lookup {
            EdgeLookup::Small(set) => set.contains(&mask),
            EdgeLookup::Large(_) => {
                let vs: Vec<usize> = crate::combinatorics::mask_bits(mask).collect();
                self.has_edge(&vs)
            }
        }
    }

    fn check_members(&self, set: &VertexSet) -> Result<()> {
        match set.max() {
            Some(v) if v >= self.n => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            _ => Ok(()),
        }
    }

    fn check_arity(&self, size: usize) -> Result<()> {
        if size == 0 || size >= self.k {
            return Err(Error::InvalidArity { size, min: 1, max: self.k - 1 });
        }
        Ok(())
    }

    /// Number of `(k-l)`-sets completing the `l`-set `t` to an edge.
    pub fn degree_of_set(&self, t: &VertexSet) -> Result<usize> {
        self.check_arity(t.len())?;
        self.check_members(t)?;
        let tv = t.to_vec();
        Ok(self
            .edges
            .iter()
            .filter(|e| tv.iter().all(|v| e.binary_search(v).is_ok()))
            .count())
    }

    /// Degree of every `l`-set that lies in at least one edge.
    fn degree_counts(&self, l: usize) -> HashMap<Vec<usize>, usize> {
        let mut counts = HashMap::new();
        for e in &self.edges {
            for sub in combinations(e, l) {
                *counts.entry(sub).or_insert(0) += 1;
            }
        }
        counts
    }

    /// `delta_l(H)`: the minimum degree over all `l`-sets.
    pub fn min_l_degree(&self, l: usize) -> Result<usize> {
        self.check_arity(l)?;
        if l > self.n {
            return Err(Error::InvalidArity { size: l, min: 1, max: self.n });
        }
        let counts = self.degree_counts(l);
        if (counts.len() as u64) < binomial(self.n as i64, l as i64) {
            return Ok(0);
        }
        Ok(counts.values().copied().min().unwrap_or(0))
    }

    /// `Delta_l(H)`: the maximum degree over all `l`-sets.
    pub fn max_l_degree(&self, l: usize) -> Result<usize> {
        self.check_arity(l)?;
        Ok(self.degree_counts(l).values().copied().max().unwrap_or(0))
    }

    /// The `(k-l)`-sets `s` with `s ∪ t` an edge, in lexicographic order.
    pub fn neighborhood(&self, t: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_arity(t.len())?;
        self.check_members(t)?;
        let tv = t.to_vec();
        Ok(self
            .edges
            .iter()
            .filter(|e| tv.iter().all(|v| e.binary_search(v).is_ok()))
            .map(|e| e.iter().copied().filter(|v| !t.contains(*v)).collect())
            .collect())
    }

    /// `L(S)`: everything outside `S` when `|S| < k-1`, otherwise the vertices
    /// that extend every `(k-1)`-subset of `S` to an edge.
    pub fn link_set(&self, s: &VertexSet) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(Error::InvalidArity { size: 0, min: 1, max: self.n });
        }
        self.check_members(s)?;
        let outside = self.vertices().difference(s);
        if s.len() < self.k - 1 {
            return Ok(outside);
        }
        let sv = s.to_vec();
        let subsets: Vec<Vec<usize>> = combinations(&sv, self.k - 1).collect();
        Ok(outside
            .iter()
            .filter(|&v| {
                subsets.iter().all(|sub| {
                    let mut e = sub.clone();
                    e.push(v);
                    self.has_edge(&e)
                })
            })
            .collect())
    }

    /// Whether every k-subset of `vertices` is an edge (vacuous below k).
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.len() < self.k || combinations(vertices, self.k).all(|e| self.has_edge(&e))
    }

    /// `H[U]`, relabelled onto `0..|U|` in ascending order of `U`.
    pub fn induced(&self, u: &VertexSet) -> Result<InducedSubgraph> {
        self.check_members(u)?;
        let vertex_map = u.to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertex_map.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| local[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| local[v]).collect())
            .collect();
        // Relabelling is monotone, so the edge list stays sorted.
        Ok(InducedSubgraph {
            graph: Self::from_canonical(vertex_map.len(), self.k, edges),
            vertex_map,
        })
    }

    /// The complement with respect to all k-subsets of `0..n`.
    pub fn complement(&self) -> Hypergraph {
        let all: Vec<usize> = (0..self.n).collect();
        let edges = combinations(&all, self.k)
            .filter(|e| !self.has_edge(e))
            .collect();
        Self::from_canonical(self.n, self.k, edges)
    }

    /// Applies the vertex permutation `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {} but n = {}",
                perm.len(),
                self.n
            )));
        }
        Hypergraph::new(
            self.n,
            self.k,
            self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect()),
        )
    }

    /// Copy with the given extra edges (existing ones are ignored).
    pub fn with_edges<I: IntoIterator<Item = Vec<usize>>>(&self, extra: I) -> Result<Hypergraph> {
        let mut all: BTreeSet<Vec<usize>> = self.edges.iter().cloned().collect();
        for mut e in extra {
            e.sort_unstable();
            if e.len() != self.k {
                return Err(Error::EdgeArity { len: e.len(), edge: e, k: self.k });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= self.n) {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            all.insert(e);
        }
        Ok(Self::from_canonical(self.n, self.k, all.into_iter().collect()))
    }

    /// Copy without the given edges.
    pub fn without_edges(&self, removed: &[Vec<usize>]) -> Hypergraph {
        let gone: HashSet<Vec<usize>> = removed
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.sort_unstable();
                e
            })
            .collect();
        let edges = self.edges.iter().filter(|e| !gone.contains(*e)).cloned().collect();
        Self::from_canonical(self.n, self.k, edges)
    }

    /// For `n <= 64`: maps each `(k-1)`-set mask lying in an edge to the mask
    /// of vertices completing it.
    pub(crate) fn link_masks(&self) -> HashMap<u64, u64> {
        let mut map: HashMap<u64, u64> = HashMap::new();
        for e in &self.edges {
            let m = mask_of(e);
            for &v in e {
                *map.entry(m & !(1u64 << v)).or_insert(0) |= 1u64 << v;
            }
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, k: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, k, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn degree_examples() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(k5.degree_of_set(&[0, 3].into()).unwrap(), 3);
        // {123, 124} in 1-based labels.
        let g = h(5, 3, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(g.degree_of_set(&[0, 1].into()).unwrap(), 2);
        assert_eq!(g.max_l_degree(2).unwrap(), 2);
        assert_eq!(g.min_l_degree(2).unwrap(), 0);
        assert!(matches!(
            g.degree_of_set(&[0, 1, 2].into()),
            Err(Error::InvalidArity { .. })
        ));
        assert!(g.degree_of_set(&VertexSet::new()).is_err());
    }

    #[test]
    fn complete_degrees() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(k6.min_l_degree(2).unwrap(), 4);
        assert_eq!(k6.min_l_degree(1).unwrap(), 10);
        let k7 = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(k7.max_l_degree(2).unwrap(), 5);
        let e = Hypergraph::empty(6, 3).unwrap();
        assert_eq!(e.min_l_degree(2).unwrap(), 0);
        assert!(e.min_l_degree(3).is_err());
    }

    #[test]
    fn fano_max_codegree() {
        let fano = h(
            7,
            3,
            &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6], &[1, 3, 5], &[1, 4, 6], &[2, 3, 6], &[2, 4, 5]],
        );
        assert_eq!(fano.max_l_degree(2).unwrap(), 1);
        assert_eq!(fano.min_l_degree(2).unwrap(), 1);
    }

    #[test]
    fn neighborhoods() {
        let g = h(5, 3, &[&[0, 1, 2], &[0, 1, 3]]);
        let nb = g.neighborhood(&[0, 1].into()).unwrap();
        assert_eq!(nb, vec![VertexSet::singleton(2), VertexSet::singleton(3)]);
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let nb = k4.neighborhood(&VertexSet::singleton(0)).unwrap();
        assert_eq!(nb, vec![[1, 2].into(), [1, 3].into(), [2, 3].into()]);
        let e = Hypergraph::empty(5, 3).unwrap();
        assert!(e.neighborhood(&[1, 2].into()).unwrap().is_empty());
    }

    #[test]
    fn links() {
        let g = h(5, 3, &[&[0, 1, 2]]);
        // |S| = 1 < k - 1: everything else.
        assert_eq!(g.link_set(&VertexSet::singleton(0)).unwrap(), [1, 2, 3, 4].into());
        let k4 = Hypergraph::complete(4, 3).unwrap();
        assert_eq!(k4.link_set(&[0, 1, 2].into()).unwrap(), VertexSet::singleton(3));
        let k6 = Hypergraph::complete(6, 4).unwrap();
        assert_eq!(k6.link_set(&[0, 1, 2, 3].into()).unwrap(), [4, 5].into());
        assert!(g.link_set(&VertexSet::new()).is_err());
    }

    #[test]
    fn induced_and_complement() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        let sub = k5.induced(&[0, 2, 3, 4].into()).unwrap();
        assert_eq!(sub.graph, Hypergraph::complete(4, 3).unwrap());
        assert_eq!(sub.vertex_map, vec![0, 2, 3, 4]);
        let e = Hypergraph::empty(5, 3).unwrap();
        assert_eq!(e.complement(), k5);
        assert_eq!(k5.complement().complement(), k5);
        assert_eq!(k5.complement().edge_count(), 0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Hypergraph::new(4, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]),
            Err(Error::DuplicateEdge(vec![0, 1, 2]))
        );
        assert!(matches!(
            Hypergraph::new(4, 3, vec![vec![0, 1, 4]]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 4 })
        ));
        assert!(matches!(Hypergraph::new(4, 3, vec![vec![0, 1]]), Err(Error::EdgeArity { .. })));
        assert!(matches!(Hypergraph::new(4, 3, vec![vec![0, 1, 1]]), Err(Error::RepeatedVertex(_))));
        assert_eq!(Hypergraph::new(4, 1, Vec::new()), Err(Error::BadUniformity(1)));
    }

    #[test]
    fn large_vertex_sets_use_slow_lookup() {
        let g = Hypergraph::new(100, 3, vec![vec![5, 70, 99]]).unwrap();
        assert!(g.has_edge(&[99, 5, 70]));
        assert!(!g.has_edge(&[5, 70, 98]));
        assert_eq!(g.degree_of_set(&[70, 99].into()).unwrap(), 1);
    }
}
