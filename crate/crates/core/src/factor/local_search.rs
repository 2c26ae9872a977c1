//! Weight-ascending local search over partitions into t-sets.
//!
//! Each part scores `w(|G|)` where `G` is its largest complete subset. A
//! move is accepted only if it strictly raises the total weight, so the
//! search always terminates. Full parts become the copies of `K_t^k`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{mask_bits, submasks_of_size};
use crate::error::{Error, Result};
use crate::factor::clique::CliqueFinder;
use crate::factor::matching::hopcroft_karp;
use crate::factor::tiling::Tiling;
use crate::hypergraph::Hypergraph;
use crate::params::{weight_table_scaled, Rational, MAX_T};
use crate::pattern::{Embedding, Pattern};
use crate::rng::{shuffle, split_seed};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchConfig {
    pub restarts: usize,
    /// Safety valve; the weight bound already guarantees termination.
    pub max_moves: usize,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig { restarts: 8, max_moves: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// Donor part's vertices each join a part whose clique they extend.
    Connection,
    Swap,
    PairSwap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    #[serde(rename = "move")]
    pub kind: MoveKind,
    pub parts: Vec<usize>,
    pub weight_before: String,
    pub weight_after: String,
}

/// A partition of the searched vertex set into t-sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TPartition {
    pub t: usize,
    pub parts: Vec<VertexSet>,
    pub cliques: Vec<VertexSet>,
    #[serde(serialize_with = "serialize_rational")]
    pub total_weight: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl TPartition {
    /// Re-derives every invariant from `host`; returns the first problem.
    pub fn check(&self, host: &Hypergraph, within: &VertexSet) -> std::result::Result<(), String> {
        let mut seen = VertexSet::new();
        let w = weight_table_scaled(self.t);
        let mut total = 0i128;
        for (i, (p, g)) in self.parts.iter().zip(&self.cliques).enumerate() {
            if p.len() != self.t {
                return Err(format!("part {i} has {} vertices", p.len()));
            }
            if !p.is_disjoint(&seen) {
                return Err(format!("part {i} overlaps an earlier part"));
            }
            seen = seen.union(p);
            if !g.is_subset(p) || !host.is_clique(&g.to_vec()) {
                return Err(format!("clique of part {i} is not complete inside it"));
            }
            let best = CliqueFinder::new(host).largest(p.mask().expect("n <= 64"));
            if best.count_ones() as usize != g.len() {
                return Err(format!("clique of part {i} is not maximum"));
            }
            total += w[g.len()];
        }
        if &seen != within {
            return Err("parts do not cover the vertex set".into());
        }
        if scaled_to_rational(total, self.t) != self.total_weight {
            return Err("total weight is inconsistent with the parts".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartSummary {
    pub seed: u64,
    pub weight: String,
    pub moves: usize,
    pub leftover: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalSearchRun {
    pub seed: u64,
    pub tiling: Tiling,
    pub partition: TPartition,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalSearchOutcome {
    pub best: LocalSearchRun,
    pub restarts: Vec<RestartSummary>,
}

fn scaled_to_rational(w: i128, t: usize) -> Rational {
    let top: i128 = (1..=t as i128 + 1).product();
    Rational::new(BigInt::from(w), BigInt::from(top))
}

struct Search<'a> {
    t: usize,
    finder: CliqueFinder,
    weights: Vec<i128>,
    parts: Vec<u64>,
    cliques: Vec<u64>,
    trace: Vec<TraceEntry>,
    _host: &'a Hypergraph,
}

impl Search<'_> {
    fn weight_of(&self, clique: u64) -> i128 {
        self.weights[clique.count_ones() as usize]
    }

    fn total(&self) -> i128 {
        self.cliques.iter().map(|&c| self.weight_of(c)).sum()
    }

    /// Applies `changes` (part index, new part) if that raises the weight.
    fn try_apply(&mut self, kind: MoveKind, changes: &[(usize, u64)]) -> bool {
        let mut delta = 0i128;
        let mut new_cliques = Vec::with_capacity(changes.len());
        for &(i, p) in changes {
            let c = self.finder.largest(p);
            delta += self.weight_of(c) - self.weight_of(self.cliques[i]);
            new_cliques.push(c);
        }
        if delta <= 0 {
            return false;
        }
        let before = self.total();
        for (&(i, p), c) in changes.iter().zip(new_cliques) {
            self.parts[i] = p;
            self.cliques[i] = c;
        }
        let after = self.total();
        debug_assert_eq!(after, before + delta);
        let mut touched: Vec<usize> = changes.iter().map(|&(i, _)| i).collect();
        touched.sort_unstable();
        self.trace.push(TraceEntry {
            step: self.trace.len() + 1,
            kind,
            parts: touched,
            weight_before: scaled_to_rational(before, self.t).to_string(),
            weight_after: scaled_to_rational(after, self.t).to_string(),
        });
        true
    }

    /// For parts sharing clique size `i < t`, match every vertex of a donor
    /// part to a distinct such part whose clique it extends, move it there,
    /// and collect the displaced non-clique vertices as the new donor part.
    fn connection_move(&mut self) -> bool {
        let t = self.t;
        for i in 0..t {
            let targets: Vec<usize> =
                (0..self.parts.len()).filter(|&j| self.cliques[j].count_ones() as usize == i).collect();
            if targets.len() < t {
                continue;
            }
            let ext: Vec<u64> = targets.iter().map(|&j| self.finder.extenders(self.cliques[j])).collect();
            for d in 0..self.parts.len() {
                let donor: Vec<usize> = mask_bits(self.parts[d]).collect();
                let adj: Vec<Vec<usize>> = donor
                    .iter()
                    .map(|&v| {
                        (0..targets.len())
                            .filter(|&r| targets[r] != d && ext[r] >> v & 1 == 1)
                            .collect()
                    })
                    .collect();
                let m = hopcroft_karp(&adj, targets.len());
                if m.size < t {
                    continue;
                }
                let mut changes = Vec::with_capacity(t + 1);
                let mut new_donor = 0u64;
                for (s, &v) in donor.iter().enumerate() {
                    let j = targets[m.left[s].expect("perfect on the donor side")];
                    let spare = self.parts[j] & !self.cliques[j];
                    let u = spare.trailing_zeros() as usize;
                    new_donor |= 1u64 << u;
                    changes.push((j, (self.parts[j] & !(1u64 << u)) | (1u64 << v)));
                }
                changes.push((d, new_donor));
                if self.try_apply(MoveKind::Connection, &changes) {
                    return true;
                }
            }
        }
        false
    }

    fn swap_move(&mut self, width: usize) -> bool {
        let kind = if width == 1 { MoveKind::Swap } else { MoveKind::PairSwap };
        for p in 0..self.parts.len() {
            for q in p + 1..self.parts.len() {
                if self.cliques[p] == self.parts[p] && self.cliques[q] == self.parts[q] {
                    continue;
                }
                let (pp, qq) = (self.parts[p], self.parts[q]);
                for a in submasks_of_size(pp, width).collect::<Vec<_>>() {
                    for b in submasks_of_size(qq, width) {
                        let changes = [(p, (pp & !a) | b), (q, (qq & !b) | a)];
                        if self.try_apply(kind, &changes) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn run(&mut self, max_moves: usize) {
        while self.trace.len() < max_moves {
            let improved = self.connection_move()
                || self.swap_move(1)
                || (self.t >= 2 && self.swap_move(2));
            if !improved {
                break;
            }
        }
    }
}

/// Local search on `H[within]` from a given starting partition.
pub fn search_from(host: &Hypergraph, t: usize, parts: Vec<VertexSet>, max_moves: usize) -> Result<(TPartition, Vec<TraceEntry>)> {
    let finder = CliqueFinder::new(host);
    let masks: Vec<u64> = parts.iter().map(|p| p.mask().expect("n <= 64")).collect();
    let cliques = masks.iter().map(|&p| finder.largest(p)).collect();
    let mut s = Search {
        t,
        finder,
        weights: weight_table_scaled(t),
        parts: masks,
        cliques,
        trace: Vec::new(),
        _host: host,
    };
    s.run(max_moves);
    let total = s.total();
    let partition = TPartition {
        t,
        parts: s.parts.iter().map(|&p| VertexSet::from_mask(p)).collect(),
        cliques: s.cliques.iter().map(|&c| VertexSet::from_mask(c)).collect(),
        total_weight: scaled_to_rational(total, t),
    };
    Ok((partition, s.trace))
}

fn validate(host: &Hypergraph, t: usize, within: &VertexSet, caps: &Caps) -> Result<()> {
    if t < host.k() || t > MAX_T {
        return Err(Error::InvalidParameter(format!(
            "local search needs k <= t <= {MAX_T}, got k = {}, t = {t}",
            host.k()
        )));
    }
    Caps::check("host order for the local search", host.n(), caps.local_search.min(64))?;
    if within.len() % t != 0 {
        return Err(Error::Divisibility { order: t, n: within.len() });
    }
    Ok(())
}

/// One seeded run on `H[within]`.
pub fn search_once(host: &Hypergraph, t: usize, within: &VertexSet, seed: u64, config: &LocalSearchConfig, caps: &Caps) -> Result<LocalSearchRun> {
    validate(host, t, within, caps)?;
    let mut order = within.to_vec();
    shuffle(&mut order, seed);
    let parts: Vec<VertexSet> = order.chunks(t).map(|c| c.iter().copied().collect()).collect();
    let (partition, trace) = search_from(host, t, parts, config.max_moves)?;
    let pattern = Pattern::complete(t, host.k())?;
    let copies = partition
        .parts
        .iter()
        .zip(&partition.cliques)
        .filter(|(p, g)| p.len() == g.len())
        .map(|(p, _)| Embedding { image: p.to_vec() })
        .collect();
    let tiling = Tiling::new(pattern, copies, within);
    Ok(LocalSearchRun { seed, tiling, partition, trace })
}

/// Restarts from seeds split off `seed` and keeps the heaviest final
/// partition, ties going to the lowest seed.
pub fn search_within(host: &Hypergraph, t: usize, within: &VertexSet, seed: u64, config: &LocalSearchConfig, caps: &Caps) -> Result<LocalSearchOutcome> {
    validate(host, t, within, caps)?;
    let runs = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|r| search_once(host, t, within, split_seed(seed, r), config, caps))
        .collect::<Result<Vec<_>>>()?;
    let restarts = runs
        .iter()
        .map(|r| RestartSummary {
            seed: r.seed,
            weight: r.partition.total_weight.to_string(),
            moves: r.trace.len(),
            leftover: r.tiling.leftover.len(),
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| {
            let better = b.partition.total_weight > a.partition.total_weight
                || (b.partition.total_weight == a.partition.total_weight && b.seed < a.seed);
            if better { b } else { a }
        })
        .expect("at least one restart");
    Ok(LocalSearchOutcome { best, restarts })
}

/// Almost-perfect `K_t^k`-tiling of the whole host.
pub fn almost_factor_local_search(host: &Hypergraph, t: usize, seed: u64, config: &LocalSearchConfig, caps: &Caps) -> Result<LocalSearchOutcome> {
    search_within(host, t, &host.vertices(), seed, config, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::tiling::verify_tiling;

    fn weights_increase(trace: &[TraceEntry]) -> bool {
        let parse = |s: &str| s.parse::<Rational>().unwrap();
        trace.iter().all(|e| parse(&e.weight_after) > parse(&e.weight_before))
            && trace.windows(2).all(|w| w[0].weight_after == w[1].weight_before)
    }

    #[test]
    fn complete_host_is_fully_tiled() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let out = almost_factor_local_search(&h, 4, 1, &LocalSearchConfig::default(), &Caps::default()).unwrap();
        assert!(out.best.tiling.is_perfect());
        assert!(out.best.trace.is_empty());
        assert_eq!(out.restarts.len(), 8);
    }

    #[test]
    fn two_blocks_get_sorted_out() {
        // Two disjoint K_4^3 blocks; a random start mixes them, the search
        // must separate them again.
        let mut edges = Vec::new();
        for base in [0, 4] {
            edges.extend(crate::combinatorics::combinations(&[base, base + 1, base + 2, base + 3], 3));
        }
        let h = Hypergraph::new(8, 3, edges).unwrap();
        for seed in 0..10 {
            let out = almost_factor_local_search(&h, 4, seed, &LocalSearchConfig::default(), &Caps::default()).unwrap();
            assert!(out.best.tiling.is_perfect(), "seed {seed}");
            assert!(weights_increase(&out.best.trace));
            assert!(verify_tiling(&h, &out.best.tiling).ok);
            out.best.partition.check(&h, &h.vertices()).unwrap();
        }
    }

    #[test]
    fn divisibility_and_range() {
        let h = Hypergraph::complete(10, 3).unwrap();
        let cfg = LocalSearchConfig::default();
        assert!(matches!(
            almost_factor_local_search(&h, 4, 0, &cfg, &Caps::default()),
            Err(Error::Divisibility { .. })
        ));
        assert!(almost_factor_local_search(&h, 2, 0, &cfg, &Caps::default()).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let h = Hypergraph::new(9, 3, vec![vec![0, 1, 2], vec![3, 4, 5], vec![2, 4, 6], vec![6, 7, 8]]).unwrap();
        let cfg = LocalSearchConfig::default();
        let a = almost_factor_local_search(&h, 3, 5, &cfg, &Caps::default()).unwrap();
        let b = almost_factor_local_search(&h, 3, 5, &cfg, &Caps::default()).unwrap();
        assert_eq!(a.best.trace, b.best.trace);
        assert_eq!(a.best.tiling, b.best.tiling);
    }
}
