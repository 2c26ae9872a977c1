//! Independence number of a k-graph by branch and bound.

use std::collections::HashMap;

use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{mask_bits, submasks_of_size};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub size: usize,
    pub witness: VertexSet,
    /// `false` when only a greedy lower bound was computed.
    pub exact: bool,
}

pub fn is_independent(h: &Hypergraph, s: &VertexSet) -> bool {
    h.edges().iter().all(|e| !e.iter().all(|&v| s.contains(v)))
}

struct Search {
    k: usize,
    links: HashMap<u64, u64>,
    order: Vec<usize>,
    best: u64,
}

impl Search {
    /// Vertices that would close an edge with `with ∪ {v}` for an edge through `v`.
    fn forbidden_by(&self, with: u64, v: usize) -> u64 {
        let mut out = 0;
        for rest in submasks_of_size(with, self.k - 2) {
            out |= self.links.get(&(rest | 1u64 << v)).copied().unwrap_or(0);
        }
        out
    }

    /// Greedy partition of `cand` into complete sets; an independent set
    /// takes at most `k-1` vertices from each.
    fn bound(&self, cand: u64) -> usize {
        let mut classes: Vec<u64> = Vec::new();
        for &v in &self.order {
            if cand >> v & 1 == 0 {
                continue;
            }
            let slot = classes.iter_mut().find(|q| {
                (q.count_ones() as usize) < self.k - 1
                    || submasks_of_size(**q, self.k - 1).all(|t| self.links.get(&t).is_some_and(|l| l >> v & 1 == 1))
            });
            match slot {
                Some(q) => *q |= 1u64 << v,
                None => classes.push(1u64 << v),
            }
        }
        classes.iter().map(|q| (q.count_ones() as usize).min(self.k - 1)).sum()
    }

    fn run(&mut self, set: u64, cand: u64) {
        if set.count_ones() > self.best.count_ones() {
            self.best = set;
        }
        if cand == 0 || set.count_ones() as usize + self.bound(cand) <= self.best.count_ones() as usize {
            return;
        }
        let v = *self.order.iter().find(|&&v| cand >> v & 1 == 1).expect("cand is non-empty");
        let bit = 1u64 << v;
        let forbidden = self.forbidden_by(set, v);
        self.run(set | bit, cand & !bit & !forbidden);
        self.run(set, cand & !bit);
    }
}

fn degree_order(h: &Hypergraph) -> Vec<usize> {
    let mut deg = vec![0usize; h.n()];
    for e in h.edges() {
        for &v in e {
            deg[v] += 1;
        }
    }
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    order
}

/// Greedy maximal independent set, low-degree vertices first.
fn greedy(h: &Hypergraph) -> VertexSet {
    let mut order = degree_order(h);
    order.reverse();
    let mut set = VertexSet::new();
    for v in order {
        set.insert(v);
        if !is_independent(h, &set) {
            set.remove(v);
        }
    }
    set
}

/// Exact for `n <= caps.independence` (and `n <= 64`); a greedy lower bound
/// otherwise.
pub fn independence_number(h: &Hypergraph, caps: &Caps) -> Independence {
    if h.n() > caps.independence.min(64) {
        let witness = greedy(h);
        return Independence { size: witness.len(), witness, exact: false };
    }
    let full = if h.n() == 64 { u64::MAX } else { (1u64 << h.n()) - 1 };
    let mut s = Search { k: h.k(), links: h.link_masks(), order: degree_order(h), best: 0 };
    s.run(0, full);
    Independence { size: s.best.count_ones() as usize, witness: mask_bits(s.best).collect(), exact: true }
}
