//! Seeded random hosts with a guaranteed minimum codegree.

use std::collections::HashMap;

use crate::caps::Caps;
use crate::combinatorics::{binomial, combinations};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng;

/// Starts from `K_n^k`, visits the edges in a seeded random order and deletes
/// each one whose removal keeps every codegree at least `min_codegree`.
///
/// The result has `δ_{k−1} ≥ min_codegree` and is edge-minimal for that
/// property along the visiting order.
pub fn random_min_codegree(n: usize, k: usize, min_codegree: usize, seed: u64, caps: &Caps) -> Result<Hypergraph> {
    if k < 2 || n < k {
        return Err(Error::InvalidParameter(format!("need 2 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    if min_codegree > n - k + 1 {
        return Err(Error::InvalidParameter(format!(
            "minimum codegree {min_codegree} exceeds n − k + 1 = {}",
            n - k + 1
        )));
    }
    Caps::check("k-sets in the random generator", binomial(n as i64, k as i64) as usize, caps.design)?;
    let all: Vec<usize> = (0..n).collect();
    let mut edges: Vec<Vec<usize>> = combinations(&all, k).collect();
    let mut codeg: HashMap<Vec<usize>, usize> = combinations(&all, k - 1).map(|s| (s, n - k + 1)).collect();
    rng::shuffle(&mut edges, seed);
    let mut keep = Vec::with_capacity(edges.len());
    for e in edges {
        let subs: Vec<Vec<usize>> = combinations(&e, k - 1).collect();
        if subs.iter().all(|s| codeg[s] > min_codegree) {
            for s in subs {
                *codeg.get_mut(&s).unwrap() -= 1;
            }
        } else {
            keep.push(e);
        }
    }
    keep.sort_unstable();
    Ok(Hypergraph::from_canonical(n, k, keep))
}
