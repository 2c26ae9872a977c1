//! Random-greedy partial t-(n,k,λ) designs and their validation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{binomial, binomial_big, combinations, falling_factorial_big, unrank_combination};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng;

/// A partial design under construction: blocks in insertion order and the
/// multiplicity of every t-set covered so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignState {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub lambda: usize,
    pub blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    multiplicity: HashMap<Vec<usize>, usize>,
}

impl DesignState {
    pub fn new(n: usize, k: usize, t: usize, lambda: usize) -> Result<Self> {
        if t == 0 || t >= k || k > n {
            return Err(Error::InvalidParameter(format!("need 1 ≤ t < k ≤ n, got t = {t}, k = {k}, n = {n}")));
        }
        Ok(DesignState { n, k, t, lambda, blocks: Vec::new(), multiplicity: HashMap::new() })
    }

    pub fn multiplicity(&self, tset: &[usize]) -> usize {
        self.multiplicity.get(tset).copied().unwrap_or(0)
    }

    /// Whether `block` (sorted) can be added without any t-set exceeding λ.
    pub fn can_add(&self, block: &[usize]) -> bool {
        combinations(block, self.t).all(|s| self.multiplicity(&s) < self.lambda)
    }

    pub fn add(&mut self, block: Vec<usize>) {
        for s in combinations(&block, self.t) {
            *self.multiplicity.entry(s).or_insert(0) += 1;
        }
        self.blocks.push(block);
    }

    pub fn try_add(&mut self, block: Vec<usize>) -> bool {
        let ok = self.can_add(&block);
        if ok {
            self.add(block);
        }
        ok
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        Hypergraph::new(self.n, self.k, self.blocks.iter().cloned())
    }

    /// A k-set outside the design that could still be added, if any.
    /// Exhaustive over all `C(n, k)` sets.
    pub fn maximality_violation(&self, caps: &Caps) -> Result<Option<Vec<usize>>> {
        Caps::check("k-sets scanned for maximality", binomial(self.n as i64, self.k as i64) as usize, caps.design)?;
        let present: std::collections::HashSet<&Vec<usize>> = self.blocks.iter().collect();
        let all: Vec<usize> = (0..self.n).collect();
        Ok(combinations(&all, self.k).find(|b| !present.contains(b) && self.can_add(b)))
    }
}

/// Orders all k-sets of `0..n` by a seeded Fisher–Yates shuffle and adds
/// each one that keeps every t-set multiplicity at most λ.
pub fn random_greedy_design(n: usize, k: usize, t: usize, lambda: usize, seed: u64, caps: &Caps) -> Result<DesignState> {
    let mut state = DesignState::new(n, k, t, lambda)?;
    let total = binomial(n as i64, k as i64);
    Caps::check("k-sets ordered by the design process", total as usize, caps.design)?;
    let mut order: Vec<u64> = (0..total).collect();
    rng::shuffle(&mut order, seed);
    for r in order {
        state.try_add(unrank_combination(n, k, r));
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DesignVerdict {
    Pass,
    /// The lexicographically first t-set lying in more than λ blocks.
    Violation { tset: Vec<usize>, multiplicity: usize },
}

impl DesignVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, DesignVerdict::Pass)
    }
}

pub fn is_partial_design(blocks: &[Vec<usize>], n: usize, k: usize, t: usize, lambda: usize) -> Result<DesignVerdict> {
    if t == 0 || t > k {
        return Err(Error::InvalidParameter(format!("need 1 ≤ t ≤ k, got t = {t}, k = {k}")));
    }
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for b in blocks {
        let mut b = b.clone();
        b.sort_unstable();
        if b.len() != k {
            return Err(Error::EdgeArity { len: b.len(), edge: b, k });
        }
        if let Some(&v) = b.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if b.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(b));
        }
        for s in combinations(&b, t) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    Ok(match counts.into_iter().find(|&(_, c)| c > lambda) {
        Some((tset, multiplicity)) => DesignVerdict::Violation { tset, multiplicity },
        None => DesignVerdict::Pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BLambdaWitness {
    pub pair: [usize; 2],
    pub petals: Vec<usize>,
}

/// The first pair (lexicographically) lying in more than λ edges, with all
/// of its petal vertices; `None` when the 3-graph is B_λ-free.
pub fn contains_b_lambda(h: &Hypergraph, lambda: usize) -> Result<Option<BLambdaWitness>> {
    if h.k() != 3 {
        return Err(Error::UniformityMismatch { pattern_k: 3, host_k: h.k() });
    }
    let mut petals: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in h.edges() {
        for (a, b, c) in [(e[0], e[1], e[2]), (e[0], e[2], e[1]), (e[1], e[2], e[0])] {
            petals.entry((a, b)).or_default().push(c);
        }
    }
    Ok(petals.into_iter().find(|(_, p)| p.len() > lambda).map(|((a, b), mut p)| {
        p.sort_unstable();
        BLambdaWitness { pair: [a, b], petals: p }
    }))
}

// ------------------------------------------------------- order formula

/// `⌊ln(y) · 2^bits⌋` up to an additive error returned alongside.
fn ln_fixed(y: &BigUint, bits: u64) -> (BigInt, BigInt) {
    fn atanh(num: &BigInt, den: &BigInt, bits: u64) -> (BigInt, u64) {
        let one = BigInt::one() << bits;
        let z = (num << bits) / den;
        let z2 = (&z * &z) >> bits;
        let mut term = z;
        let mut sum = BigInt::zero();
        let mut j = 0u64;
        while !term.is_zero() {
            sum += &term / (2 * j + 1);
            term = (&term * &z2) >> bits;
            j += 1;
        }
        debug_assert!(sum < one);
        (sum, j + 2)
    }
    let e = y.bits() - 1;
    let pow = BigInt::one() << e;
    let y = BigInt::from(y.clone());
    let (frac, n1) = atanh(&(&y - &pow), &(&y + &pow), bits);
    let (ln2, n2) = atanh(&BigInt::one(), &BigInt::from(3), bits);
    let value = (ln2 * 2u32) * e + frac * 2u32;
    let err = BigInt::from(2 * (n1 + n2 * e + e + 4));
    (value, err)
}

fn order_numerator(t: usize, k: usize, lambda: u64, x: u64) -> BigUint {
    BigUint::from(8u32)
        * falling_factorial_big(k as u64, t as u64)
        * binomial_big(k as i64 - 1, t as i64)
        * binomial_big(k as i64, t as i64)
        * lambda
        * BigUint::from(x).pow((k - 1) as u32)
}

fn check_order_args(t: usize, k: usize, lambda: u64, x: u64) -> Result<()> {
    if t == 0 || k <= t {
        return Err(Error::InvalidParameter(format!("need k > t ≥ 1, got k = {k}, t = {t}")));
    }
    if lambda.checked_mul(x).is_none_or(|p| p < 2) {
        return Err(Error::InvalidParameter(format!("need λx ≥ 2 so that ln(λx) > 0, got λ = {lambda}, x = {x}")));
    }
    Ok(())
}

/// `⌈(8 (k)_t C(k−1,t) C(k,t) λ x^{k−1} / ln(λx))^{1/(k−t)}⌉`, decided
/// exactly: the ceiling is the least `n` with `n^{k−t} ln(λx) ≥ A`, and each
/// comparison is made with a fixed-point logarithm whose precision is raised
/// until the comparison is unambiguous.
pub fn design_order_formula(t: usize, k: usize, lambda: u64, x: u64) -> Result<BigUint> {
    design_order_formula_with_precision(t, k, lambda, x, 128)
}

pub fn design_order_formula_with_precision(t: usize, k: usize, lambda: u64, x: u64, bits: u64) -> Result<BigUint> {
    check_order_args(t, k, lambda, x)?;
    let a = BigInt::from(order_numerator(t, k, lambda, x));
    let d = (k - t) as u32;
    let lx = BigUint::from(lambda) * x;
    let mut bits = bits.max(32);
    'precision: loop {
        let (ln, err) = ln_fixed(&lx, bits);
        let target = &a << bits;
        // Some(true): n^d ln ≥ A; None: undecided at this precision.
        let ge = |n: &BigUint| -> Option<bool> {
            let p = BigInt::from(n.pow(d));
            if &p * (&ln - &err) >= target {
                Some(true)
            } else if &p * (&ln + &err) < target {
                Some(false)
            } else {
                None
            }
        };
        let mut hi = BigUint::one();
        loop {
            match ge(&hi) {
                Some(true) => break,
                Some(false) => hi <<= 1,
                None => {
                    bits *= 2;
                    continue 'precision;
                }
            }
        }
        let mut lo = &hi >> 1u32; // ge(lo) is false, or lo = 0
        while &lo + 1u32 < hi {
            let mid = (&lo + &hi) >> 1u32;
            match ge(&mid) {
                Some(true) => hi = mid,
                Some(false) => lo = mid,
                None => {
                    bits *= 2;
                    continue 'precision;
                }
            }
        }
        return Ok(hi);
    }
}

/// Double-precision evaluation of the same display, for cross-checking.
pub fn design_order_formula_f64(t: usize, k: usize, lambda: u64, x: u64) -> Result<f64> {
    check_order_args(t, k, lambda, x)?;
    let a = order_numerator(t, k, lambda, x).to_f64().unwrap_or(f64::INFINITY);
    let ln = (lambda as f64 * x as f64).ln();
    Ok((a / ln).powf(1.0 / (k - t) as f64))
}
