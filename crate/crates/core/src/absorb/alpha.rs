//! α-good (k-1)-sets and pairs.
//!
//! A (k-1)-set `S` is α-good for `x, y` when `deg(S) >= ⌈αn⌉` and both
//! `S ∪ {x}` and `S ∪ {y}` are edges; the pair is good when at least
//! `⌈α·C(n,k-1)⌉` such sets exist.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

fn ceil_mul(alpha: Ratio<u64>, x: u64) -> u64 {
    (Ratio::from_integer(x) * alpha).ceil().to_integer()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaPair {
    pub good: bool,
    pub count: u64,
    pub threshold: u64,
}

/// All-pairs α-goodness over one host.
pub struct AlphaAnalysis {
    n: usize,
    /// `(k-1)`-set mask → link mask, restricted to sets of degree `>= ⌈αn⌉`.
    heavy: Vec<u64>,
    threshold: u64,
}

impl AlphaAnalysis {
    pub fn new(host: &Hypergraph, alpha: Ratio<u64>) -> Result<Self> {
        if alpha <= Ratio::from_integer(0) || alpha > Ratio::from_integer(1) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1]")));
        }
        if host.n() > 64 {
            return Err(Error::CapExceeded { what: "host order for the alpha analysis", value: host.n(), cap: 64 });
        }
        let links: HashMap<u64, u64> = host.link_masks();
        let min_deg = ceil_mul(alpha, host.n() as u64);
        let mut heavy: Vec<u64> = links
            .into_iter()
            .filter(|(_, l)| u64::from(l.count_ones()) >= min_deg)
            .map(|(_, l)| l)
            .collect();
        heavy.sort_unstable();
        let threshold = ceil_mul(alpha, binomial(host.n() as i64, host.k() as i64 - 1));
        Ok(AlphaAnalysis { n: host.n(), heavy, threshold })
    }

    pub fn pair(&self, x: usize, y: usize) -> AlphaPair {
        let both = (1u64 << x) | (1u64 << y);
        let count = self.heavy.iter().filter(|&&l| l & both == both).count() as u64;
        AlphaPair { good: count >= self.threshold, count, threshold: self.threshold }
    }

    /// Number of α-bad partners of each vertex.
    pub fn bad_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for x in 0..self.n {
            for y in x + 1..self.n {
                if !self.pair(x, y).good {
                    deg[x] += 1;
                    deg[y] += 1;
                }
            }
        }
        deg
    }

    /// Vertices lying in at least `⌈n/4⌉` α-bad pairs.
    pub fn bad_vertices(&self) -> VertexSet {
        let cut = self.n.div_ceil(4);
        self.bad_degrees()
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d >= cut)
            .map(|(v, _)| v)
            .collect()
    }
}

pub fn alpha_good_pair(host: &Hypergraph, x: usize, y: usize, alpha: Ratio<u64>) -> Result<AlphaPair> {
    for v in [x, y] {
        if v >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
        }
    }
    if x == y {
        return Err(Error::InvalidParameter("alpha-goodness needs two distinct vertices".into()));
    }
    Ok(AlphaAnalysis::new(host, alpha)?.pair(x, y))
}
