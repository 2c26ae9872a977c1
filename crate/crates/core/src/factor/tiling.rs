use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;
use crate::pattern::{Embedding, Pattern};
use crate::vertex_set::VertexSet;

/// Vertex-disjoint copies of a pattern in a host, plus the uncovered vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub pattern: Pattern,
    pub copies: Vec<Embedding>,
    pub leftover: VertexSet,
}

impl Tiling {
    /// Builds a tiling of the vertex set `within`, deriving the leftover.
    pub fn new(pattern: Pattern, copies: Vec<Embedding>, within: &VertexSet) -> Self {
        let covered: VertexSet = copies.iter().flat_map(|c| c.image.iter().copied()).collect();
        Tiling { pattern, copies, leftover: within.difference(&covered) }
    }

    pub fn empty(pattern: Pattern, within: &VertexSet) -> Self {
        Tiling { pattern, copies: Vec::new(), leftover: within.clone() }
    }

    pub fn covered(&self) -> VertexSet {
        self.copies.iter().flat_map(|c| c.image.iter().copied()).collect()
    }

    pub fn is_perfect(&self) -> bool {
        self.leftover.is_empty()
    }

    /// Merges another tiling of a disjoint region into this one.
    pub fn absorb_tiling(&mut self, other: Tiling) {
        self.copies.extend(other.copies);
        self.leftover = self.leftover.union(&other.leftover);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ImageSize { copy: usize, len: usize, order: usize },
    VertexOutOfRange { copy: usize, vertex: usize },
    Disjointness { copy: usize, vertex: usize },
    EdgePreservation { copy: usize, edge: Vec<usize> },
    Leftover { expected: VertexSet, found: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingReport {
    pub ok: bool,
    pub copies: usize,
    pub covered: usize,
    pub leftover: usize,
    pub perfect: bool,
    pub violation: Option<Violation>,
}

/// Re-checks a tiling from scratch against `host`, where the tiled region is
/// `covered ∪ leftover` and must lie inside `within`.
pub fn verify_tiling_within(host: &Hypergraph, tiling: &Tiling, within: &VertexSet) -> TilingReport {
    let order = tiling.pattern.order();
    let mut used = VertexSet::new();
    let mut violation = None;
    'copies: for (ci, copy) in tiling.copies.iter().enumerate() {
        if copy.image.len() != order {
            violation = Some(Violation::ImageSize { copy: ci, len: copy.image.len(), order });
            break;
        }
        for &v in &copy.image {
            if v >= host.n() || !within.contains(v) {
                violation = Some(Violation::VertexOutOfRange { copy: ci, vertex: v });
                break 'copies;
            }
            if !used.insert(v) {
                violation = Some(Violation::Disjointness { copy: ci, vertex: v });
                break 'copies;
            }
        }
        for e in tiling.pattern.graph().edges() {
            let image: Vec<usize> = e.iter().map(|&p| copy.image[p]).collect();
            if !host.has_edge(&image) {
                let mut image = image;
                image.sort_unstable();
                violation = Some(Violation::EdgePreservation { copy: ci, edge: image });
                break 'copies;
            }
        }
    }
    if violation.is_none() {
        let expected = within.difference(&used);
        if expected != tiling.leftover {
            violation = Some(Violation::Leftover { expected, found: tiling.leftover.clone() });
        }
    }
    TilingReport {
        ok: violation.is_none(),
        copies: tiling.copies.len(),
        covered: used.len(),
        leftover: tiling.leftover.len(),
        perfect: violation.is_none() && tiling.leftover.is_empty(),
        violation,
    }
}

/// [`verify_tiling_within`] over the whole vertex set.
pub fn verify_tiling(host: &Hypergraph, tiling: &Tiling) -> TilingReport {
    verify_tiling_within(host, tiling, &host.vertices())
}
