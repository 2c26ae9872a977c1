//! Closeness witnesses, counts and the closeness graph.
//!
//! `x` and `y` are close at level `i` through a set `S` of `i·t - 1`
//! vertices when both `H[S ∪ {x}]` and `H[S ∪ {y}]` have perfect tilings.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{binomial, submasks_of_size};
use crate::error::{Error, Result};
use crate::factor::oracle::FactorOracle;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosenessWitness {
    pub x: usize,
    pub y: usize,
    pub i: usize,
    pub s: VertexSet,
}

impl ClosenessWitness {
    /// Re-checks the witness from scratch with `oracle`.
    pub fn verify(&self, oracle: &FactorOracle) -> Result<()> {
        let t = oracle.pattern().order();
        let bad = |why: String| Err(Error::InvalidWitness(why));
        if self.i == 0 || self.s.len() != self.i * t - 1 {
            return bad(format!("|S| = {} but level {} needs {}", self.s.len(), self.i, self.i * t - 1));
        }
        if self.x == self.y || self.s.contains(self.x) || self.s.contains(self.y) {
            return bad("S must avoid two distinct endpoints".into());
        }
        for v in [self.x, self.y] {
            let mut with = self.s.clone();
            with.insert(v);
            if !oracle.has_factor(&with) {
                return bad(format!("S ∪ {{{v}}} has no perfect tiling"));
            }
        }
        Ok(())
    }
}

fn check_pair(oracle: &FactorOracle, n: usize, x: usize, y: usize, i: usize) -> Result<usize> {
    let t = oracle.pattern().order();
    if x == y {
        return Err(Error::InvalidParameter("closeness needs two distinct vertices".into()));
    }
    if x >= n || y >= n {
        return Err(Error::VertexOutOfRange { vertex: x.max(y), n });
    }
    if i == 0 || i * t - 1 > n.saturating_sub(2) {
        return Err(Error::InvalidParameter(format!("level i = {i} needs 1 <= i*t - 1 <= n - 2")));
    }
    Ok(i * t - 1)
}

fn check_candidates(n: usize, size: usize, caps: &Caps) -> Result<()> {
    let count = binomial(n as i64, size as i64);
    Caps::check("candidate sets to examine", usize::try_from(count).unwrap_or(usize::MAX), caps.candidates)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 { u64::MAX } else { (1u64 << n) - 1 }
}

/// Number of `(i·t-1)`-sets witnessing that `x` and `y` are close.
pub fn closeness_count(oracle: &FactorOracle, n: usize, x: usize, y: usize, i: usize, caps: &Caps) -> Result<u64> {
    let m1 = check_pair(oracle, n, x, y, i)?;
    check_candidates(n - 2, m1, caps)?;
    let rest = full_mask(n) & !(1u64 << x) & !(1u64 << y);
    let count = submasks_of_size(rest, m1)
        .par_bridge()
        .filter(|&s| oracle.has_factor_mask(s | 1u64 << x) && oracle.has_factor_mask(s | 1u64 << y))
        .count();
    Ok(count as u64)
}

/// The first witness (in colex order of `S`) avoiding `avoid`.
pub fn find_witness(oracle: &FactorOracle, n: usize, x: usize, y: usize, i: usize, avoid: &VertexSet) -> Result<Option<ClosenessWitness>> {
    let m1 = check_pair(oracle, n, x, y, i)?;
    let avoid = avoid.mask().unwrap_or(0);
    let rest = full_mask(n) & !(1u64 << x) & !(1u64 << y) & !avoid;
    Ok(submasks_of_size(rest, m1)
        .find(|&s| oracle.has_factor_mask(s | 1u64 << x) && oracle.has_factor_mask(s | 1u64 << y))
        .map(|s| ClosenessWitness { x, y, i, s: VertexSet::from_mask(s) }))
}

/// Joins witnesses for `(x, z)` and `(y, z)` into one for `(x, y)` at the
/// summed level, with `S = S_x ∪ S_y ∪ {z}`.
pub fn compose_witnesses(oracle: &FactorOracle, w1: &ClosenessWitness, w2: &ClosenessWitness) -> Result<ClosenessWitness> {
    if w1.y != w2.y {
        return Err(Error::InvalidParameter(format!(
            "witnesses must share their second vertex, got {} and {}",
            w1.y, w2.y
        )));
    }
    let (x, y, z) = (w1.x, w2.x, w1.y);
    let overlap = |what: &str| Err(Error::WitnessOverlap(what.to_string()));
    if x == y {
        return overlap("the outer vertices coincide");
    }
    if !w1.s.is_disjoint(&w2.s) {
        return overlap("the two witness sets intersect");
    }
    for v in [x, y, z] {
        if w1.s.contains(v) || w2.s.contains(v) {
            return overlap("a witness set contains one of x, y, z");
        }
    }
    let mut s = w1.s.union(&w2.s);
    s.insert(z);
    let out = ClosenessWitness { x, y, i: w1.i + w2.i, s };
    out.verify(oracle)?;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosenessGraph {
    pub n: usize,
    pub i: usize,
    pub tau: u64,
    /// `counts[x][y]`, symmetric, zero on the diagonal.
    pub counts: Vec<Vec<u64>>,
}

impl ClosenessGraph {
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        x != y && self.counts[x][y] >= self.tau
    }

    pub fn neighbours(&self, x: usize) -> VertexSet {
        (0..self.n).filter(|&y| self.adjacent(x, y)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|x| (x + 1..self.n).filter(|&y| self.adjacent(x, y)).count()).sum()
    }

    /// `(min, max)` over unordered pairs of the pair counts.
    pub fn count_range(&self) -> (u64, u64) {
        let mut lo = u64::MAX;
        let mut hi = 0;
        for x in 0..self.n {
            for y in x + 1..self.n {
                lo = lo.min(self.counts[x][y]);
                hi = hi.max(self.counts[x][y]);
            }
        }
        if lo == u64::MAX {
            lo = 0;
        }
        (lo, hi)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|x| self.neighbours(x).len()).min().unwrap_or(0)
    }

    /// Breadth-first distances from `x`; `None` when unreachable.
    pub fn distances(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbours(u).iter() {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest path from `x` to `y`, if any.
    pub fn path(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.n];
        prev[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            if u == y {
                let mut path = vec![y];
                let mut v = y;
                while v != x {
                    v = prev[v];
                    path.push(v);
                }
                path.reverse();
                return Some(path);
            }
            for v in self.neighbours(u).iter() {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Largest finite distance, or `None` if the graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for x in 0..self.n {
            for d in self.distances(x) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

/// Threshold `⌈num/den · C(n-2, i·t-1)⌉` for a fractional density.
pub fn tau_from_fraction(n: usize, t: usize, i: usize, num: u64, den: u64) -> Result<u64> {
    if den == 0 || num > den {
        return Err(Error::InvalidParameter(format!("fraction {num}/{den} must lie in [0, 1]")));
    }
    let total = binomial(n as i64 - 2, (i * t) as i64 - 1) as u128;
    let tau = (total * num as u128).div_ceil(den as u128);
    Ok((tau as u64).max(1))
}

pub fn closeness_graph(oracle: &FactorOracle, n: usize, i: usize, tau: u64, caps: &Caps) -> Result<ClosenessGraph> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1".into()));
    }
    let t = oracle.pattern().order();
    if n < 2 {
        return Ok(ClosenessGraph { n, i, tau, counts: vec![vec![0; n]; n] });
    }
    check_pair(oracle, n, 0, 1, i)?;
    let per_pair = binomial(n as i64 - 2, (i * t) as i64 - 1);
    let pairs = binomial(n as i64, 2);
    Caps::check(
        "candidate sets to examine",
        usize::try_from(per_pair.saturating_mul(pairs)).unwrap_or(usize::MAX),
        caps.candidates,
    )?;
    let mut counts = vec![vec![0u64; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let c = closeness_count(oracle, n, x, y, i, caps)?;
            counts[x][y] = c;
            counts[y][x] = c;
        }
    }
    Ok(ClosenessGraph { n, i, tau, counts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedPartition {
    pub classes: Vec<VertexSet>,
    /// Every class is a clique of the closeness graph.
    pub all_cliques: bool,
}

/// Connected components of the closeness graph, ordered by least vertex,
/// flagged by whether they are all cliques.
pub fn closed_partition(g: &ClosenessGraph) -> ClosedPartition {
    let mut seen = vec![false; g.n];
    let mut classes = Vec::new();
    for x in 0..g.n {
        if seen[x] {
            continue;
        }
        let class: VertexSet = (0..g.n).filter(|&v| g.distances(x)[v].is_some()).collect();
        for v in class.iter() {
            seen[v] = true;
        }
        classes.push(class);
    }
    let all_cliques = classes.iter().all(|c| {
        let vs = c.to_vec();
        vs.iter().enumerate().all(|(a, &x)| vs[a + 1..].iter().all(|&y| g.adjacent(x, y)))
    });
    ClosedPartition { classes, all_cliques }
}

/// Largest host for the brute-force good-triple count.
pub const GOOD_TRIPLES_MAX_N: usize = 16;

/// Counts triples `(x, y, T)` with `x ∈ X`, `y ∈ Y`, `x ≠ y` and `T` a
/// `(t-1)`-set such that both `T ∪ {x}` and `T ∪ {y}` span complete k-graphs.
pub fn good_triples(host: &crate::Hypergraph, t: usize, xs: &VertexSet, ys: &VertexSet) -> Result<u64> {
    let n = host.n();
    Caps::check("host order for the good-triple count", n, GOOD_TRIPLES_MAX_N)?;
    if t < 2 || t > n {
        return Err(Error::InvalidParameter(format!("t = {t} out of range")));
    }
    let finder = crate::factor::clique::CliqueFinder::new(host);
    let mut total = 0;
    for tset in submasks_of_size(full_mask(n), t - 1) {
        if finder.largest(tset) != tset {
            continue;
        }
        let ext = finder.extenders(tset) & full_mask(n);
        let nx = xs.iter().filter(|&x| ext >> x & 1 == 1).count() as u64;
        let ny = ys.iter().filter(|&y| ext >> y & 1 == 1).count() as u64;
        let both = xs.intersection(ys).iter().filter(|&v| ext >> v & 1 == 1).count() as u64;
        total += nx * ny - both;
    }
    Ok(total)
}
