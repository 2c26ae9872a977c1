//! Largest complete sub-k-graph inside a small vertex set.

use std::collections::HashMap;

use crate::caps::Caps;
use crate::combinatorics::{mask_bits, submasks_of_size};
use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

/// Reusable clique search over a fixed host with at most 64 vertices.
pub struct CliqueFinder {
    k: usize,
    links: HashMap<u64, u64>,
}

impl CliqueFinder {
    pub fn new(host: &Hypergraph) -> Self {
        assert!(host.n() <= 64, "clique search needs a host with at most 64 vertices");
        CliqueFinder { k: host.k(), links: host.link_masks() }
    }

    /// Vertices `v` such that `T ∪ {v}` is an edge for every `(k-1)`-subset
    /// `T` of `clique`; everything when `|clique| < k-1`.
    pub fn extenders(&self, clique: u64) -> u64 {
        if (clique.count_ones() as usize) < self.k - 1 {
            return !clique;
        }
        let mut cand = !clique;
        for t in submasks_of_size(clique, self.k - 1) {
            cand &= self.links.get(&t).copied().unwrap_or(0);
            if cand == 0 {
                break;
            }
        }
        cand
    }

    /// A maximum subset of `within` spanning a complete k-graph (sets of size
    /// at most `k-1` qualify), lexicographically smallest among the maximum.
    pub fn largest(&self, within: u64) -> u64 {
        let mut best = 0u64;
        self.grow(0, within, within, &mut best);
        best
    }

    fn grow(&self, clique: u64, cand: u64, within: u64, best: &mut u64) {
        if clique.count_ones() > best.count_ones() {
            *best = clique;
        }
        if clique.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        for v in mask_bits(cand) {
            let next = clique | (1u64 << v);
            // Only later vertices, so each set is built in ascending order.
            let later = cand & !((2u64 << v) - 1);
            let ext = if (next.count_ones() as usize) < self.k - 1 {
                later
            } else {
                later & self.extenders(next) & within
            };
            self.grow(next, ext, within, best);
        }
    }
}

/// Largest complete subset of `u`, with the size of `u` capped.
pub fn largest_clique_in(host: &Hypergraph, u: &VertexSet, caps: &Caps) -> Result<VertexSet> {
    Caps::check("set size for the clique search", u.len(), caps.clique)?;
    if host.n() <= 64 {
        let finder = CliqueFinder::new(host);
        return Ok(VertexSet::from_mask(finder.largest(u.mask().expect("n <= 64"))));
    }
    // Larger hosts: plain search over subsets, largest first.
    let items = u.to_vec();
    for size in (0..=items.len()).rev() {
        for combo in crate::combinatorics::combinations(&items, size) {
            if host.is_clique(&combo) {
                return Ok(combo.into_iter().collect());
            }
        }
    }
    Ok(VertexSet::new())
}
