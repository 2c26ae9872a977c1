//! Exact F-factor oracle, greedy covers and the clique-weight local search.

pub mod clique;
pub mod local_search;
pub mod matching;
pub mod oracle;
pub mod tiling;

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::pattern::{for_each_embedding, Embedding, Pattern};
use crate::vertex_set::VertexSet;

pub use clique::{largest_clique_in, CliqueFinder};
pub use local_search::{almost_factor_local_search, LocalSearchConfig, LocalSearchOutcome, TPartition};
pub use matching::hopcroft_karp;
pub use oracle::{exact_factor, FactorOracle};
pub use tiling::{verify_tiling, verify_tiling_within, Tiling, TilingReport, Violation};

#[derive(Debug, Clone, Serialize)]
pub struct Cover {
    pub tiling: Tiling,
    pub uncovered_targets: VertexSet,
}

/// Greedily picks disjoint copies, each through a target vertex: targets are
/// visited in ascending order and each takes the first copy (in enumeration
/// order) avoiding everything already used, preferring copies that contain
/// no other target.
pub fn greedy_disjoint_cover(host: &Hypergraph, pattern: &Pattern, targets: &VertexSet) -> Result<Cover> {
    greedy_disjoint_cover_within(host, pattern, targets, &host.vertices())
}

/// As [`greedy_disjoint_cover`], using only vertices of `within`.
pub fn greedy_disjoint_cover_within(
    host: &Hypergraph,
    pattern: &Pattern,
    targets: &VertexSet,
    within: &VertexSet,
) -> Result<Cover> {
    let mut used = VertexSet::new();
    let mut copies = Vec::new();
    let mut uncovered = VertexSet::new();
    let roots: Vec<usize> = match pattern.clique_order() {
        Some(_) => vec![0],
        None => (0..pattern.order()).collect(),
    };
    for v in targets.iter() {
        if used.contains(v) {
            continue;
        }
        let mut chosen: Option<Embedding> = None;
        let mut fallback: Option<Embedding> = None;
        for &p in &roots {
            for_each_embedding(host, pattern, &[(p, v)], |e| {
                if e.image.iter().all(|&u| within.contains(u) && !used.contains(u)) {
                    if e.image.iter().all(|&u| u == v || !targets.contains(u)) {
                        chosen = Some(e.clone());
                        return ControlFlow::Break(());
                    }
                    fallback.get_or_insert_with(|| e.clone());
                }
                ControlFlow::Continue(())
            })?;
            if chosen.is_some() {
                break;
            }
        }
        let chosen = chosen.or(fallback);
        match chosen {
            Some(e) => {
                used = used.union(&e.vertex_set());
                copies.push(e);
            }
            None => {
                uncovered.insert(v);
            }
        }
    }
    Ok(Cover { tiling: Tiling::new(pattern.clone(), copies, within), uncovered_targets: uncovered })
}
