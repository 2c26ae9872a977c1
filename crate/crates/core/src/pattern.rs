//! Patterns to be tiled and their embeddings into a host.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinatorics::mask_of;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

/// Largest host the embedding search accepts (bitmask representation).
pub const MAX_EMBEDDING_HOST: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternKind {
    /// `K_t^k`.
    Complete { t: usize, k: usize },
    /// `K_k^k(m_1, .., m_k)`.
    CompletePartite { parts: Vec<usize> },
    /// `B_lambda = K_3^3(1, 1, lambda + 1)`.
    Book { lambda: usize },
    Explicit,
}

/// The k-graph `F` being tiled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    kind: PatternKind,
    graph: Hypergraph,
}

impl Pattern {
    pub fn complete(t: usize, k: usize) -> Result<Self> {
        if t < k {
            return Err(Error::InvalidPattern(format!("K_{t}^{k} needs t >= k")));
        }
        Ok(Pattern {
            kind: PatternKind::Complete { t, k },
            graph: Hypergraph::complete(t, k)?,
        })
    }

    pub fn complete_partite(parts: &[usize]) -> Result<Self> {
        let k = parts.len();
        if k < 2 || parts.iter().any(|&m| m == 0) {
            return Err(Error::InvalidPattern(format!(
                "complete partite pattern needs at least two non-empty parts, got {parts:?}"
            )));
        }
        let mut classes = Vec::with_capacity(k);
        let mut next = 0;
        for &m in parts {
            classes.push((next..next + m).collect::<Vec<_>>());
            next += m;
        }
        let mut edges = vec![Vec::new()];
        for class in &classes {
            edges = edges
                .into_iter()
                .flat_map(|e: Vec<usize>| {
                    class.iter().map(move |&v| {
                        let mut e = e.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        Ok(Pattern {
            kind: PatternKind::CompletePartite { parts: parts.to_vec() },
            graph: Hypergraph::from_sets(next, k, edges),
        })
    }

    pub fn book(lambda: usize) -> Result<Self> {
        let mut p = Self::complete_partite(&[1, 1, lambda + 1])?;
        p.kind = PatternKind::Book { lambda };
        Ok(p)
    }

    pub fn explicit(graph: Hypergraph) -> Result<Self> {
        if graph.n() < graph.k() {
            return Err(Error::InvalidPattern(format!(
                "pattern has {} vertices, fewer than its uniformity {}",
                graph.n(),
                graph.k()
            )));
        }
        Ok(Pattern { kind: PatternKind::Explicit, graph })
    }

    /// A single edge, `K_k^k`; tiling with it is a perfect matching.
    pub fn edge(k: usize) -> Result<Self> {
        Self::complete(k, k)
    }

    /// Parses `K:t:k`, `KP:k:m1,..,mk` or `B:lambda`. Explicit patterns
    /// (`F:<file>`) are resolved by the caller, which owns file access.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidPattern(format!("cannot parse pattern spec {spec:?}"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        let fields: Vec<&str> = spec.split(':').collect();
        match fields.as_slice() {
            ["K", t, k] => Self::complete(num(t)?, num(k)?),
            ["KP", k, ms] => {
                let parts = ms.split(',').map(num).collect::<Result<Vec<_>>>()?;
                if parts.len() != num(k)? {
                    return Err(Error::InvalidPattern(format!(
                        "{spec:?} lists {} part sizes for k = {k}",
                        parts.len()
                    )));
                }
                Self::complete_partite(&parts)
            }
            ["B", lambda] => Self::book(num(lambda)?),
            _ => Err(bad()),
        }
    }

    pub fn kind(&self) -> &PatternKind {
        &self.kind
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    /// `|F|`.
    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn uniformity(&self) -> usize {
        self.graph.k()
    }

    /// Every permutation of the vertices is an automorphism.
    fn fully_symmetric(&self) -> bool {
        matches!(self.kind, PatternKind::Complete { .. })
    }

    pub fn clique_order(&self) -> Option<usize> {
        match self.kind {
            PatternKind::Complete { t, .. } => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PatternKind::Complete { t, k } => write!(f, "K:{t}:{k}"),
            PatternKind::CompletePartite { parts } => {
                let ms: Vec<String> = parts.iter().map(|m| m.to_string()).collect();
                write!(f, "KP:{}:{}", parts.len(), ms.join(","))
            }
            PatternKind::Book { lambda } => write!(f, "B:{lambda}"),
            PatternKind::Explicit => write!(f, "explicit"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    spec: String,
    order: usize,
    uniformity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<Vec<usize>>>,
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PatternRepr {
            spec: self.to_string(),
            order: self.order(),
            uniformity: self.uniformity(),
            edges: matches!(self.kind, PatternKind::Explicit).then(|| self.graph.edges().to_vec()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PatternRepr::deserialize(deserializer)?;
        match repr.edges {
            Some(edges) => Hypergraph::new(repr.order, repr.uniformity, edges)
                .and_then(Pattern::explicit)
                .map_err(D::Error::custom),
            None => Pattern::parse(&repr.spec).map_err(D::Error::custom),
        }
    }
}

/// An injective, edge-preserving map from pattern vertices into the host:
/// pattern vertex `i` goes to `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding {
    pub image: Vec<usize>,
}

impl Embedding {
    pub fn vertex_set(&self) -> VertexSet {
        self.image.iter().copied().collect()
    }

    pub fn mask(&self) -> u64 {
        mask_of(&self.image)
    }

    /// Checks injectivity and edge preservation against `host`.
    pub fn is_valid(&self, host: &Hypergraph, pattern: &Pattern) -> bool {
        let vs = self.vertex_set();
        self.image.len() == pattern.order()
            && vs.len() == self.image.len()
            && self.image.iter().all(|&v| v < host.n())
            && pattern
                .graph()
                .edges()
                .iter()
                .all(|e| host.has_edge(&e.iter().map(|&p| self.image[p]).collect::<Vec<_>>()))
    }
}

struct EmbeddingSearch<'a> {
    host: &'a Hypergraph,
    order: Vec<usize>,
    /// Pattern edges completed when `order[i]` is assigned, as the other
    /// pattern vertices of the edge.
    completes: Vec<Vec<Vec<usize>>>,
    links: std::collections::HashMap<u64, u64>,
    anchored: usize,
    increasing_free: bool,
    image: Vec<usize>,
    used: u64,
    seen: HashSet<(u64, Vec<u64>)>,
    pattern_edges: &'a [Vec<usize>],
}

impl EmbeddingSearch<'_> {
    fn run<F>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Embedding) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            let mut key_edges: Vec<u64> = self
                .pattern_edges
                .iter()
                .map(|e| e.iter().fold(0u64, |m, &p| m | (1u64 << self.image[p])))
                .collect();
            key_edges.sort_unstable();
            if self.seen.insert((self.used, key_edges)) {
                return visit(&Embedding { image: self.image.clone() });
            }
            return ControlFlow::Continue(());
        }
        let p = self.order[depth];
        let full = if self.host.n() == 64 { u64::MAX } else { (1u64 << self.host.n()) - 1 };
        let mut cand = if depth < self.anchored {
            1u64 << self.image[p]
        } else {
            full & !self.used
        };
        for others in &self.completes[depth] {
            let key = others.iter().fold(0u64, |m, &q| m | (1u64 << self.image[q]));
            cand &= self.links.get(&key).copied().unwrap_or(0);
        }
        if self.increasing_free && depth > self.anchored {
            let prev = self.image[self.order[depth - 1]];
            cand &= !((2u64 << prev) - 1);
        }
        if depth < self.anchored && cand & self.used != 0 {
            return ControlFlow::Continue(());
        }
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.image[p] = v;
            self.used |= 1u64 << v;
            let flow = self.run(depth + 1, visit);
            self.used &= !(1u64 << v);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every copy of `pattern` in `host` respecting the `(pattern vertex,
/// host vertex)` anchors, once per unordered copy (embeddings differing by a
/// pattern automorphism are reported once), in a deterministic order.
pub fn for_each_embedding<F>(
    host: &Hypergraph,
    pattern: &Pattern,
    anchors: &[(usize, usize)],
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&Embedding) -> ControlFlow<()>,
{
    if pattern.uniformity() != host.k() {
        return Err(Error::UniformityMismatch { pattern_k: pattern.uniformity(), host_k: host.k() });
    }
    if host.n() > MAX_EMBEDDING_HOST {
        return Err(Error::CapExceeded {
            what: "host order for embedding search",
            value: host.n(),
            cap: MAX_EMBEDDING_HOST,
        });
    }
    let t = pattern.order();
    for &(p, v) in anchors {
        if p >= t {
            return Err(Error::VertexOutOfRange { vertex: p, n: t });
        }
        if v >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
        }
    }
    if t > host.n() {
        return Ok(());
    }
    let mut image = vec![usize::MAX; t];
    let mut order = Vec::with_capacity(t);
    for &(p, v) in anchors {
        if image[p] != usize::MAX {
            if image[p] != v {
                return Ok(());
            }
            continue;
        }
        image[p] = v;
        order.push(p);
    }
    let anchored = order.len();
    let mut distinct: Vec<usize> = order.iter().map(|&p| image[p]).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != anchored {
        return Ok(());
    }

    // Greedy vertex order: complete as many pattern edges as early as possible.
    let edges = pattern.graph().edges();
    let mut placed = vec![false; t];
    for &p in &order {
        placed[p] = true;
    }
    while order.len() < t {
        let best = (0..t)
            .filter(|&p| !placed[p])
            .max_by_key(|&p| {
                let completed = edges
                    .iter()
                    .filter(|e| e.contains(&p) && e.iter().all(|&q| q == p || placed[q]))
                    .count();
                let touching = edges.iter().filter(|e| e.contains(&p)).count();
                (completed, touching, std::cmp::Reverse(p))
            })
            .expect("an unplaced vertex exists");
        placed[best] = true;
        order.push(best);
    }
    let mut position = vec![0; t];
    for (i, &p) in order.iter().enumerate() {
        position[p] = i;
    }
    let mut completes = vec![Vec::new(); t];
    for e in edges {
        let last = e.iter().copied().max_by_key(|&p| position[p]).expect("non-empty edge");
        completes[position[last]].push(e.iter().copied().filter(|&q| q != last).collect());
    }

    let mut search = EmbeddingSearch {
        host,
        order,
        completes,
        links: host.link_masks(),
        anchored,
        increasing_free: pattern.fully_symmetric(),
        image,
        used: 0,
        seen: HashSet::new(),
        pattern_edges: edges,
    };
    let _ = search.run(0, &mut visit);
    Ok(())
}

/// All copies of `pattern` in `host` satisfying `anchors`.
pub fn enumerate_embeddings(
    host: &Hypergraph,
    pattern: &Pattern,
    anchors: &[(usize, usize)],
) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    for_each_embedding(host, pattern, anchors, |e| {
        out.push(e.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Copies of `pattern` containing `v`, over every choice of pattern vertex
/// mapped to `v`, deduplicated by vertex set.
pub fn copies_through(host: &Hypergraph, pattern: &Pattern, v: usize) -> Result<Vec<Embedding>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let roots: Vec<usize> = if pattern.fully_symmetric() { vec![0] } else { (0..pattern.order()).collect() };
    for p in roots {
        for_each_embedding(host, pattern, &[(p, v)], |e| {
            if seen.insert(e.mask()) {
                out.push(e.clone());
            }
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// The distinct vertex sets spanning a copy of `pattern`, each with one
/// witnessing embedding, in order of first discovery.
pub fn copy_vertex_sets(host: &Hypergraph, pattern: &Pattern) -> Result<Vec<(u64, Embedding)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_embedding(host, pattern, &[], |e| {
        let m = e.mask();
        if seen.insert(m) {
            out.push((m, e.clone()));
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Number of automorphisms of the pattern, by brute-force self-embedding.
pub fn automorphism_count(pattern: &Pattern) -> usize {
    let g = pattern.graph();
    let t = g.n();
    let items: Vec<usize> = (0..t).collect();
    let mut count = 0;
    permute(&mut items.clone(), 0, &mut |perm| {
        if g.edges().iter().all(|e| g.has_edge(&e.iter().map(|&v| perm[v]).collect::<Vec<_>>())) {
            count += 1;
        }
    });
    count
}

fn permute(items: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == items.len() {
        f(items);
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        permute(items, i + 1, f);
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::combinations;

    #[test]
    fn parse_specs() {
        assert_eq!(Pattern::parse("K:4:3").unwrap(), Pattern::complete(4, 3).unwrap());
        let kp = Pattern::parse("KP:3:2,2,2").unwrap();
        assert_eq!(kp.order(), 6);
        assert_eq!(kp.graph().edge_count(), 8);
        let b = Pattern::parse("B:2").unwrap();
        assert_eq!(b.order(), 5);
        assert_eq!(b.graph().edge_count(), 3);
        assert_eq!(b.to_string(), "B:2");
        assert!(Pattern::parse("KP:3:2,2").is_err());
        assert!(Pattern::parse("K:2:3").is_err());
        assert!(Pattern::parse("Q:1").is_err());
    }

    #[test]
    fn k4_in_k5() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let f = Pattern::complete(4, 3).unwrap();
        let embs = enumerate_embeddings(&h, &f, &[]).unwrap();
        assert_eq!(embs.len(), 5);
        assert!(embs.iter().all(|e| e.is_valid(&h, &f)));
    }

    #[test]
    fn book_in_two_edges() {
        let h = Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let embs = enumerate_embeddings(&h, &Pattern::book(1).unwrap(), &[]).unwrap();
        assert_eq!(embs.len(), 1);
        assert_eq!(embs[0].vertex_set(), [0, 1, 2, 3].into());
        assert_eq!(&embs[0].image[..2], &[0, 1]);
    }

    #[test]
    fn bipartitions_of_k4() {
        // Brute force: the 2+2 splits of 4 vertices.
        let h = Hypergraph::complete(4, 2).unwrap();
        let f = Pattern::complete_partite(&[2, 2]).unwrap();
        let embs = enumerate_embeddings(&h, &f, &[]).unwrap();
        let mut splits = std::collections::HashSet::new();
        for e in &embs {
            let a = mask_of(&e.image[..2]);
            let b = mask_of(&e.image[2..]);
            splits.insert(a.min(b));
        }
        assert_eq!(embs.len(), 3);
        assert_eq!(splits.len(), 3);
    }

    #[test]
    fn single_edge_pattern_counts_edges() {
        let h = Hypergraph::new(6, 3, vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        let embs = enumerate_embeddings(&h, &Pattern::edge(3).unwrap(), &[]).unwrap();
        assert_eq!(embs.len(), 3);
    }

    #[test]
    fn anchors() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let f = Pattern::complete(4, 3).unwrap();
        let through0 = enumerate_embeddings(&h, &f, &[(0, 0)]).unwrap();
        assert_eq!(through0.len(), 10);
        assert!(through0.iter().all(|e| e.image[0] == 0));
        assert!(matches!(
            enumerate_embeddings(&h, &f, &[(0, 9)]),
            Err(Error::VertexOutOfRange { .. })
        ));
        let conflicting = enumerate_embeddings(&h, &f, &[(0, 1), (1, 1)]).unwrap();
        assert!(conflicting.is_empty());
        let b = Pattern::book(1).unwrap();
        let h2 = Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(copies_through(&h2, &b, 3).unwrap().len(), 1);
        assert_eq!(copies_through(&h2, &b, 4).unwrap().len(), 0);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(automorphism_count(&Pattern::complete(4, 3).unwrap()), 24);
        assert_eq!(automorphism_count(&Pattern::book(1).unwrap()), 4);
        assert_eq!(automorphism_count(&Pattern::complete_partite(&[2, 2]).unwrap()), 8);
    }

    #[test]
    fn embedding_count_times_automorphisms_is_injective_map_count() {
        // Oracle: count injective edge-preserving maps directly.
        let h = Hypergraph::new(
            6,
            3,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4], vec![2, 3, 4], vec![1, 2, 5]],
        )
        .unwrap();
        let f = Pattern::book(1).unwrap();
        let copies = enumerate_embeddings(&h, &f, &[]).unwrap().len();
        let mut maps = 0;
        let verts: Vec<usize> = (0..6).collect();
        for combo in combinations(&verts, 4) {
            permute(&mut combo.clone(), 0, &mut |img| {
                let e = Embedding { image: img.to_vec() };
                if e.is_valid(&h, &f) {
                    maps += 1;
                }
            });
        }
        assert_eq!(copies * automorphism_count(&f), maps);
    }
}
