//! Absorbing sets and families of disjoint absorbers.
//!
//! An m-set `A` absorbs a t-set `T` (disjoint from it) when both `H[A]` and
//! `H[A ∪ T]` have perfect tilings. A family of disjoint absorbers lets a
//! leftover made of t-sets be swallowed one t-set per absorber.

use rand::Rng as _;
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{binomial, submasks_of_size};
use crate::error::{Error, Result};
use crate::factor::matching::hopcroft_karp;
use crate::factor::oracle::FactorOracle;
use crate::factor::tiling::Tiling;
use crate::rng::rng;
use crate::vertex_set::VertexSet;

/// `m = (t-1)·((i·t-1)+1)`.
pub fn absorber_size(t: usize, i: usize) -> usize {
    (t - 1) * (i * t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbsorbingSet {
    /// The t-set this member was chosen to absorb.
    pub target: VertexSet,
    pub set: VertexSet,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 { u64::MAX } else { (1u64 << n) - 1 }
}

pub fn absorbs_mask(oracle: &FactorOracle, a: u64, t: u64) -> bool {
    a & t == 0 && oracle.has_factor_mask(a) && oracle.has_factor_mask(a | t)
}

pub fn absorbs(oracle: &FactorOracle, a: &VertexSet, t: &VertexSet) -> bool {
    absorbs_mask(oracle, a.mask().expect("n <= 64"), t.mask().expect("n <= 64"))
}

fn check_target(oracle: &FactorOracle, n: usize, target: &VertexSet, i: usize, caps: &Caps) -> Result<usize> {
    let t = oracle.pattern().order();
    if target.len() != t {
        return Err(Error::InvalidArity { size: target.len(), min: t, max: t });
    }
    if target.max().is_some_and(|v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: target.max().unwrap(), n });
    }
    if i == 0 {
        return Err(Error::InvalidParameter("level i must be at least 1".into()));
    }
    let m = absorber_size(t, i);
    if m + t > n {
        return Err(Error::InvalidParameter(format!("absorbers of size {m} do not fit beside a t-set in {n} vertices")));
    }
    let count = binomial((n - t) as i64, m as i64);
    Caps::check("candidate sets to examine", usize::try_from(count).unwrap_or(usize::MAX), caps.candidates)?;
    Ok(m)
}

/// Every absorbing m-set for `target`, in enumeration order.
pub fn absorbing_sets_for(oracle: &FactorOracle, n: usize, target: &VertexSet, i: usize, caps: &Caps) -> Result<Vec<VertexSet>> {
    let m = check_target(oracle, n, target, i, caps)?;
    let tm = target.mask().expect("n <= 64");
    Ok(submasks_of_size(full_mask(n) & !tm, m)
        .filter(|&a| absorbs_mask(oracle, a, tm))
        .map(VertexSet::from_mask)
        .collect())
}

/// `|𝓛(T)|`, counted in parallel.
pub fn absorber_count(oracle: &FactorOracle, n: usize, target: &VertexSet, i: usize, caps: &Caps) -> Result<u64> {
    use rayon::prelude::*;
    let m = check_target(oracle, n, target, i, caps)?;
    let tm = target.mask().expect("n <= 64");
    Ok(submasks_of_size(full_mask(n) & !tm, m)
        .par_bridge()
        .filter(|&a| absorbs_mask(oracle, a, tm))
        .count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum FamilyMode {
    /// Add the first absorber of the first under-served t-set until every
    /// t-set of the remainder has enough absorbers.
    Greedy,
    /// Keep each m-set independently with probability `rate`, then discard
    /// intersecting and non-absorbing ones.
    Randomized { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyConfig {
    pub i: usize,
    pub capacity_target: usize,
    pub seed: u64,
    pub mode: FamilyMode,
    /// Upper bound on `|U|`.
    pub vertex_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbsorbingFamily {
    pub t: usize,
    pub i: usize,
    pub m: usize,
    pub members: Vec<AbsorbingSet>,
    pub union: VertexSet,
}

/// `{"U": [...], "members": [[...]...], "t": t, "i": i}`.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyCertificate {
    #[serde(rename = "U")]
    pub u: VertexSet,
    pub members: Vec<VertexSet>,
    pub t: usize,
    pub i: usize,
}

impl AbsorbingFamily {
    pub fn certificate(&self) -> FamilyCertificate {
        FamilyCertificate {
            u: self.union.clone(),
            members: self.members.iter().map(|m| m.set.clone()).collect(),
            t: self.t,
            i: self.i,
        }
    }

    /// Indices of members absorbing `target`.
    pub fn absorbers_of(&self, oracle: &FactorOracle, target: &VertexSet) -> Vec<usize> {
        let tm = target.mask().expect("n <= 64");
        (0..self.members.len())
            .filter(|&j| absorbs_mask(oracle, self.members[j].set.mask().expect("n <= 64"), tm))
            .collect()
    }

    /// Re-checks the family invariants from scratch.
    pub fn verify(&self, oracle: &FactorOracle) -> Result<()> {
        let mut seen = VertexSet::new();
        for (j, a) in self.members.iter().enumerate() {
            if a.set.len() != self.m {
                return Err(Error::InvalidWitness(format!("member {j} has {} vertices, expected {}", a.set.len(), self.m)));
            }
            if !a.set.is_disjoint(&seen) {
                return Err(Error::InvalidWitness(format!("member {j} overlaps an earlier member")));
            }
            seen = seen.union(&a.set);
            if !absorbs(oracle, &a.set, &a.target) {
                return Err(Error::InvalidWitness(format!("member {j} does not absorb its target {:?}", a.target)));
            }
        }
        if seen != self.union {
            return Err(Error::InvalidWitness("U is not the union of the members".into()));
        }
        if !oracle.has_factor(&self.union) {
            return Err(Error::InvalidWitness("H[U] has no perfect tiling".into()));
        }
        Ok(())
    }

    /// Smallest number of members absorbing any t-set of `rest`, with the
    /// first t-set attaining it.
    pub fn min_capacity(&self, oracle: &FactorOracle, rest: &VertexSet) -> Option<(usize, VertexSet)> {
        let rm = rest.mask().expect("n <= 64");
        submasks_of_size(rm, self.t)
            .map(|tm| {
                let tset = VertexSet::from_mask(tm);
                (self.absorbers_of(oracle, &tset).len(), tset)
            })
            .min_by_key(|(c, _)| *c)
    }
}

/// Builds a family inside `H[within]`.
pub fn build_absorbing_family(oracle: &FactorOracle, within: &VertexSet, config: &FamilyConfig, caps: &Caps) -> Result<AbsorbingFamily> {
    let t = oracle.pattern().order();
    let n = within.len();
    let region = within.mask().expect("n <= 64");
    if config.i == 0 {
        return Err(Error::InvalidParameter("level i must be at least 1".into()));
    }
    let m = absorber_size(t, config.i);
    if m + t > n {
        return Err(Error::Infeasible(format!("absorbers of size {m} do not fit beside a t-set in {n} vertices")));
    }
    let members = match config.mode {
        FamilyMode::Greedy => greedy_members(oracle, region, m, config, caps)?,
        FamilyMode::Randomized { rate } => random_members(oracle, region, m, rate, config, caps)?,
    };
    let union = members.iter().fold(VertexSet::new(), |u, a| u.union(&a.set));
    let family = AbsorbingFamily { t, i: config.i, m, members, union };
    family.verify(oracle)?;
    Ok(family)
}

fn greedy_members(oracle: &FactorOracle, region: u64, m: usize, config: &FamilyConfig, caps: &Caps) -> Result<Vec<AbsorbingSet>> {
    let t = oracle.pattern().order();
    let mut members: Vec<AbsorbingSet> = Vec::new();
    let mut used = 0u64;
    loop {
        let rest = region & !used;
        let deficient = submasks_of_size(rest, t).find(|&tm| {
            members
                .iter()
                .filter(|a| absorbs_mask(oracle, a.set.mask().unwrap(), tm))
                .take(config.capacity_target)
                .count()
                < config.capacity_target
        });
        let Some(tm) = deficient else {
            return Ok(members);
        };
        let tset = VertexSet::from_mask(tm);
        if (used.count_ones() as usize) + m > config.vertex_budget {
            return Err(Error::Infeasible(format!(
                "t-set {tset:?} needs another absorber but |U| would exceed the budget of {} vertices",
                config.vertex_budget
            )));
        }
        let pool = rest & !tm;
        let count = binomial(pool.count_ones() as i64, m as i64);
        Caps::check("candidate sets to examine", usize::try_from(count).unwrap_or(usize::MAX), caps.candidates)?;
        match submasks_of_size(pool, m).find(|&a| absorbs_mask(oracle, a, tm)) {
            Some(a) => {
                used |= a;
                members.push(AbsorbingSet { target: tset, set: VertexSet::from_mask(a) });
            }
            None => {
                return Err(Error::Infeasible(format!(
                    "no absorbing {m}-set for t-set {tset:?} among the {} unused vertices",
                    pool.count_ones()
                )))
            }
        }
    }
}

fn random_members(oracle: &FactorOracle, region: u64, m: usize, rate: f64, config: &FamilyConfig, caps: &Caps) -> Result<Vec<AbsorbingSet>> {
    let n = region.count_ones() as usize;
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParameter(format!("sampling rate {rate} must lie in [0, 1]")));
    }
    let t = oracle.pattern().order();
    let count = binomial(n as i64, m as i64);
    Caps::check("candidate sets to examine", usize::try_from(count).unwrap_or(usize::MAX), caps.candidates)?;
    let mut r = rng(config.seed);
    let sampled: Vec<u64> = submasks_of_size(region, m).filter(|_| r.gen_bool(rate)).collect();
    // Drop every set meeting another sampled set, then the non-absorbers.
    let mut members = Vec::new();
    let mut used = 0u64;
    for (j, &a) in sampled.iter().enumerate() {
        if sampled.iter().enumerate().any(|(l, &b)| l != j && a & b != 0) {
            continue;
        }
        if !oracle.has_factor_mask(a) {
            continue;
        }
        let outside = region & !a;
        if let Some(tm) = submasks_of_size(outside, t).find(|&tm| absorbs_mask(oracle, a, tm)) {
            if (used.count_ones() as usize) + m > config.vertex_budget {
                break;
            }
            used |= a;
            members.push(AbsorbingSet { target: VertexSet::from_mask(tm), set: VertexSet::from_mask(a) });
        }
    }
    if members.is_empty() {
        return Err(Error::Infeasible("no sampled m-set survived pruning".into()));
    }
    Ok(members)
}

/// Partitions of `mask` into blocks of size `t`, each block containing the
/// least remaining vertex.
fn for_each_partition(mask: u64, t: usize, blocks: &mut Vec<u64>, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    if mask == 0 {
        return f(blocks);
    }
    let low = mask & mask.wrapping_neg();
    for rest in submasks_of_size(mask & !low, t - 1) {
        blocks.push(low | rest);
        let stop = for_each_partition(mask & !(low | rest), t, blocks, f);
        blocks.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Tiles `H[U ∪ W]` perfectly: `W` is split into t-sets, each swallowed by a
/// distinct member; unused members are tiled on their own.
pub fn absorb(oracle: &FactorOracle, family: &AbsorbingFamily, w: &VertexSet, caps: &Caps) -> Result<Tiling> {
    let t = family.t;
    if !w.is_disjoint(&family.union) {
        return Err(Error::InvalidParameter("W must avoid the absorbing family".into()));
    }
    if w.len() % t != 0 {
        return Err(Error::Divisibility { order: t, n: w.len() });
    }
    let wm = w.mask().expect("n <= 64");
    let member_masks: Vec<u64> = family.members.iter().map(|a| a.set.mask().unwrap()).collect();
    let mut assignment: Option<Vec<(u64, usize)>> = None;
    let mut stuck: Option<u64> = None;
    let mut tried = 0usize;
    for_each_partition(wm, t, &mut Vec::new(), &mut |blocks| {
        tried += 1;
        let adj: Vec<Vec<usize>> = blocks
            .iter()
            .map(|&b| (0..member_masks.len()).filter(|&j| absorbs_mask(oracle, member_masks[j], b)).collect())
            .collect();
        let matching = hopcroft_karp(&adj, member_masks.len());
        if matching.size == blocks.len() {
            assignment = Some(blocks.iter().zip(&matching.left).map(|(&b, j)| (b, j.unwrap())).collect());
            return true;
        }
        if stuck.is_none() {
            stuck = blocks.iter().zip(&matching.left).find(|(_, j)| j.is_none()).map(|(&b, _)| b);
        }
        tried >= caps.candidates
    });
    let Some(assignment) = assignment else {
        return Err(Error::AbsorptionStuck(VertexSet::from_mask(stuck.unwrap_or(wm))));
    };
    let mut extra = vec![0u64; member_masks.len()];
    for (b, j) in assignment {
        extra[j] = b;
    }
    let mut copies = Vec::new();
    for (j, &a) in member_masks.iter().enumerate() {
        let part = oracle
            .factor_mask(a | extra[j])
            .ok_or_else(|| Error::InvalidWitness(format!("member {j} lost its tiling")))?;
        copies.extend(part);
    }
    let region = family.union.union(w);
    Ok(Tiling::new(oracle.pattern().clone(), copies, &region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::tiling::verify_tiling_within;
    use crate::hypergraph::Hypergraph;
    use crate::pattern::Pattern;

    fn setup(h: &Hypergraph) -> FactorOracle {
        FactorOracle::new(h, &Pattern::edge(3).unwrap(), &Caps::default()).unwrap()
    }

    fn greedy(cap: usize, budget: usize) -> FamilyConfig {
        FamilyConfig { i: 1, capacity_target: cap, seed: 0, mode: FamilyMode::Greedy, vertex_budget: budget }
    }

    #[test]
    fn complete_host_absorber_count() {
        let h = Hypergraph::complete(10, 3).unwrap();
        let o = setup(&h);
        let target: VertexSet = [0, 4, 9].into();
        let want = binomial(7, 6);
        assert_eq!(absorbing_sets_for(&o, 10, &target, 1, &Caps::default()).unwrap().len() as u64, want);
        assert_eq!(absorber_count(&o, 10, &target, 1, &Caps::default()).unwrap(), want);
    }

    #[test]
    fn edgeless_host_has_no_absorbers() {
        let h = Hypergraph::empty(9, 3).unwrap();
        let o = setup(&h);
        assert!(absorbing_sets_for(&o, 9, &[0, 1, 2].into(), 1, &Caps::default()).unwrap().is_empty());
        assert!(matches!(
            build_absorbing_family(&o, &VertexSet::full(9), &greedy(1, 9), &Caps::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn missing_edge_matches_double_loop() {
        let h = Hypergraph::complete(9, 3).unwrap().without_edges(&[vec![0, 1, 2]]);
        let o = setup(&h);
        let target: VertexSet = [0, 1, 2].into();
        let got = absorbing_sets_for(&o, 9, &target, 1, &Caps::default()).unwrap();
        // Independent count: A = the other six vertices is the only candidate;
        // it absorbs iff both A and A ∪ T split into edges.
        let a: Vec<usize> = (3..9).collect();
        let splits = |vs: &[usize]| -> bool {
            fn go(h: &Hypergraph, rest: Vec<usize>) -> bool {
                if rest.is_empty() {
                    return true;
                }
                let v = rest[0];
                for i in 1..rest.len() {
                    for j in i + 1..rest.len() {
                        if h.has_edge(&[v, rest[i], rest[j]]) {
                            let r: Vec<usize> =
                                rest.iter().copied().filter(|&u| u != v && u != rest[i] && u != rest[j]).collect();
                            if go(h, r) {
                                return true;
                            }
                        }
                    }
                }
                false
            }
            go(&h, vs.to_vec())
        };
        let all: Vec<usize> = (0..9).collect();
        let expected = usize::from(splits(&a) && splits(&all));
        assert_eq!(got.len(), expected);
    }

    #[test]
    fn family_on_k18_serves_every_remaining_triple() {
        let h = Hypergraph::complete(18, 3).unwrap();
        let o = setup(&h);
        let fam = build_absorbing_family(&o, &VertexSet::full(18), &greedy(1, 18), &Caps::default()).unwrap();
        assert_eq!(fam.members.len(), 1);
        let rest = VertexSet::full(18).difference(&fam.union);
        let (cap, _) = fam.min_capacity(&o, &rest).unwrap();
        assert!(cap >= 1);
        let w: VertexSet = rest.iter().take(3).collect();
        let tiling = absorb(&o, &fam, &w, &Caps::default()).unwrap();
        let region = fam.union.union(&w);
        assert!(verify_tiling_within(&h, &tiling, &region).perfect);
        let empty = absorb(&o, &fam, &VertexSet::new(), &Caps::default()).unwrap();
        assert!(verify_tiling_within(&h, &empty, &fam.union).perfect);
        assert!(matches!(
            absorb(&o, &fam, &rest.iter().take(2).collect(), &Caps::default()),
            Err(Error::Divisibility { .. })
        ));
        assert!(matches!(
            absorb(&o, &fam, &rest.iter().take(6).collect(), &Caps::default()),
            Err(Error::AbsorptionStuck(_))
        ));
    }

    #[test]
    fn randomized_is_deterministic() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let o = setup(&h);
        let cfg = FamilyConfig {
            i: 1,
            capacity_target: 1,
            seed: 42,
            mode: FamilyMode::Randomized { rate: 0.002 },
            vertex_budget: 12,
        };
        let a = build_absorbing_family(&o, &VertexSet::full(12), &cfg, &Caps::default());
        let b = build_absorbing_family(&o, &VertexSet::full(12), &cfg, &Caps::default());
        assert_eq!(a, b);
    }

    #[test]
    fn certificate_shape() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let o = setup(&h);
        let fam = build_absorbing_family(&o, &VertexSet::full(12), &greedy(1, 12), &Caps::default()).unwrap();
        let v = serde_json::to_value(fam.certificate()).unwrap();
        assert_eq!(v["t"], 3);
        assert_eq!(v["i"], 1);
        assert_eq!(v["U"].as_array().unwrap().len(), 6);
    }
}
