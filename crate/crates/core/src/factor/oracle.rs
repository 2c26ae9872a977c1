use std::ops::ControlFlow;

use dashmap::DashMap;

use crate::caps::Caps;
use crate::combinatorics::mask_bits;
use crate::error::{Error, Result};
use crate::factor::tiling::Tiling;
use crate::hypergraph::Hypergraph;
use crate::pattern::{for_each_embedding, Embedding, Pattern, MAX_EMBEDDING_HOST};
use crate::vertex_set::VertexSet;

/// Memo entries kept before the oracle stops recording new verdicts.
const MEMO_LIMIT: usize = 4_000_000;

/// Exhaustive F-factor decisions on induced subgraphs of one host.
///
/// All copies of the pattern are enumerated once; a query for a vertex set
/// `U` then backtracks on the least vertex of `U` still to be covered, trying
/// only copies whose least vertex is that one. Verdicts are memoised per
/// vertex set, and the memo may be shared by concurrent callers.
pub struct FactorOracle {
    n: usize,
    order: usize,
    pattern: Pattern,
    copies: Vec<(u64, Embedding)>,
    /// Indices into `copies`, grouped by the copy's least vertex.
    by_min: Vec<Vec<usize>>,
    memo: DashMap<u64, bool>,
}

impl FactorOracle {
    pub fn new(host: &Hypergraph, pattern: &Pattern, caps: &Caps) -> Result<Self> {
        if pattern.uniformity() != host.k() {
            return Err(Error::UniformityMismatch { pattern_k: pattern.uniformity(), host_k: host.k() });
        }
        Caps::check("host order for the exact oracle", host.n(), caps.oracle.min(MAX_EMBEDDING_HOST))?;
        let mut copies = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut overflow = false;
        for_each_embedding(host, pattern, &[], |e| {
            let m = e.mask();
            if seen.insert(m) {
                copies.push((m, e.clone()));
                if copies.len() > caps.candidates {
                    overflow = true;
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
        if overflow {
            return Err(Error::CapExceeded {
                what: "pattern copies held by the oracle",
                value: copies.len(),
                cap: caps.candidates,
            });
        }
        copies.sort_by_key(|(m, _)| *m);
        let mut by_min = vec![Vec::new(); host.n()];
        for (i, (m, _)) in copies.iter().enumerate() {
            by_min[m.trailing_zeros() as usize].push(i);
        }
        Ok(FactorOracle {
            n: host.n(),
            order: pattern.order(),
            pattern: pattern.clone(),
            copies,
            by_min,
            memo: DashMap::new(),
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Distinct vertex sets spanning a copy, ascending by mask.
    pub fn copies(&self) -> &[(u64, Embedding)] {
        &self.copies
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    /// Copies whose least vertex is `v`.
    pub fn copies_with_min(&self, v: usize) -> impl Iterator<Item = &(u64, Embedding)> {
        self.by_min[v].iter().map(|&i| &self.copies[i])
    }

    /// Does `H[mask]` have a perfect tiling?
    pub fn has_factor_mask(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        if mask.count_ones() as usize % self.order != 0 {
            return false;
        }
        if let Some(v) = self.memo.get(&mask) {
            return *v;
        }
        let v = mask.trailing_zeros() as usize;
        let found = self.by_min[v]
            .iter()
            .map(|&i| self.copies[i].0)
            .any(|c| c & !mask == 0 && self.has_factor_mask(mask & !c));
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(mask, found);
        }
        found
    }

    pub fn has_factor(&self, u: &VertexSet) -> bool {
        self.has_factor_mask(Self::to_mask(u))
    }

    /// A perfect tiling of `H[mask]`, if one exists.
    pub fn factor_mask(&self, mut mask: u64) -> Option<Vec<Embedding>> {
        if !self.has_factor_mask(mask) {
            return None;
        }
        let mut out = Vec::new();
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            let &i = self.by_min[v]
                .iter()
                .find(|&&i| {
                    let c = self.copies[i].0;
                    c & !mask == 0 && self.has_factor_mask(mask & !c)
                })
                .expect("a verdict of true always has a witness");
            out.push(self.copies[i].1.clone());
            mask &= !self.copies[i].0;
        }
        Some(out)
    }

    pub fn factor(&self, u: &VertexSet) -> Option<Vec<Embedding>> {
        self.factor_mask(Self::to_mask(u))
    }

    /// Perfect tiling of the whole host, with the divisibility precondition
    /// enforced.
    pub fn exact_factor(&self) -> Result<Option<Tiling>> {
        if self.n % self.order != 0 {
            return Err(Error::Divisibility { order: self.order, n: self.n });
        }
        let all = VertexSet::full(self.n);
        Ok(self
            .factor(&all)
            .map(|copies| Tiling::new(self.pattern.clone(), copies, &all)))
    }

    /// Greedy maximal tiling of `H[mask]`: copies are taken in ascending
    /// mask order whenever they avoid everything taken so far.
    pub fn greedy_tiling_mask(&self, mask: u64) -> Vec<Embedding> {
        let mut used = 0u64;
        let mut out = Vec::new();
        for (m, e) in &self.copies {
            if m & !mask == 0 && m & used == 0 {
                used |= m;
                out.push(e.clone());
            }
        }
        out
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn to_mask(u: &VertexSet) -> u64 {
        u.mask().expect("oracle hosts have at most 64 vertices")
    }
}

/// One-shot exact F-factor decision for the whole host.
pub fn exact_factor(host: &Hypergraph, pattern: &Pattern, caps: &Caps) -> Result<Option<Tiling>> {
    if host.n() % pattern.order() != 0 {
        return Err(Error::Divisibility { order: pattern.order(), n: host.n() });
    }
    FactorOracle::new(host, pattern, caps)?.exact_factor()
}

/// Vertices of `mask` not contained in any copy.
pub fn uncoverable(oracle: &FactorOracle, mask: u64) -> VertexSet {
    let mut hit = 0u64;
    for (m, _) in oracle.copies() {
        if m & !mask == 0 {
            hit |= m;
        }
    }
    mask_bits(mask & !hit).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::tiling::verify_tiling;

    #[test]
    fn k6_perfect_matching() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let t = exact_factor(&h, &Pattern::edge(3).unwrap(), &Caps::default()).unwrap().unwrap();
        assert_eq!(t.copies.len(), 2);
        assert!(verify_tiling(&h, &t).perfect);
    }

    #[test]
    fn divisibility_is_an_error() {
        let h = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(
            exact_factor(&h, &Pattern::edge(3).unwrap(), &Caps::default()),
            Err(Error::Divisibility { order: 3, n: 7 })
        );
    }

    #[test]
    fn cap_is_an_error() {
        let h = Hypergraph::complete(9, 3).unwrap();
        let caps = Caps { oracle: 8, ..Caps::default() };
        assert!(matches!(
            exact_factor(&h, &Pattern::edge(3).unwrap(), &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn two_blocks_need_matching_sizes() {
        // K_4^3 on {0..3} and on {4..7}: a K_4^3-factor exists.
        let mut edges = Vec::new();
        for base in [0, 4] {
            for e in crate::combinatorics::combinations(&[base, base + 1, base + 2, base + 3], 3) {
                edges.push(e);
            }
        }
        let h = Hypergraph::new(8, 3, edges).unwrap();
        let o = FactorOracle::new(&h, &Pattern::complete(4, 3).unwrap(), &Caps::default()).unwrap();
        assert!(o.exact_factor().unwrap().is_some());
        assert!(!o.has_factor(&VertexSet::from([0, 1, 2, 4])));
        assert!(o.has_factor(&VertexSet::from([4, 5, 6, 7])));
        assert!(o.has_factor(&VertexSet::new()));
    }
}
