//! Binomials, falling factorials and subset enumeration.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(a, b)`, zero whenever `b > a` or either argument is negative.
pub fn binomial(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Arbitrary-precision `C(a, b)` with the same zero convention as [`binomial`].
pub fn binomial_big(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(a)_b = a (a-1) ... (a-b+1)`.
pub fn falling_factorial_big(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    (0..b).fold(BigUint::one(), |acc, i| acc * (a - i))
}

/// Lexicographic iterator over the `r`-subsets of a sorted slice of items.
#[derive(Debug, Clone)]
pub struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Combinations<'a> {
    pub fn new(items: &'a [usize], r: usize) -> Self {
        Combinations {
            items,
            idx: (0..r).collect(),
            done: r > items.len(),
        }
    }
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out: Vec<usize> = self.idx.iter().map(|&i| self.items[i]).collect();
        let r = self.idx.len();
        let n = self.items.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] != i + n - r {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All `r`-subsets of `items`, in lexicographic order.
pub fn combinations(items: &[usize], r: usize) -> Combinations<'_> {
    Combinations::new(items, r)
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut c = 0;
    for i in 0..k {
        loop {
            let below = binomial((n - 1 - c) as i64, (k - 1 - i) as i64);
            if rank < below {
                break;
            }
            rank -= below;
            c += 1;
        }
        out.push(c);
        c += 1;
    }
    out
}

/// Iterates the `r`-subsets of the bits of `mask` as masks, in colex order
/// of the positions inside `mask`.
pub fn submasks_of_size(mask: u64, r: usize) -> impl Iterator<Item = u64> {
    let bits: Vec<u32> = mask_bits(mask).map(|b| b as u32).collect();
    let n = bits.len();
    let mut idx: Vec<usize> = (0..r).collect();
    let mut done = r > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.iter().fold(0u64, |m, &i| m | (1u64 << bits[i]));
        let mut i = r;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] != i + n - r {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Positions of the set bits of `mask`, ascending.
pub fn mask_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_zero_convention() {
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(-2, 1), 0);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial_big(40, 20).to_string(), "137846528820");
    }

    #[test]
    fn unrank_matches_enumeration() {
        let all: Vec<usize> = (0..9).collect();
        for (r, c) in combinations(&all, 4).enumerate() {
            assert_eq!(unrank_combination(9, 4, r as u64), c);
        }
    }

    #[test]
    fn combination_count_and_order() {
        let items: Vec<usize> = (0..6).collect();
        let all: Vec<_> = combinations(&items, 3).collect();
        assert_eq!(all.len(), 20);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[19], vec![3, 4, 5]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(combinations(&items, 0).count(), 1);
        assert_eq!(combinations(&items, 7).count(), 0);
    }

    #[test]
    fn submask_enumeration() {
        let mask = 0b1011_0110u64;
        let subs: Vec<u64> = submasks_of_size(mask, 2).collect();
        assert_eq!(subs.len(), 10);
        assert!(subs.iter().all(|s| s & !mask == 0 && s.count_ones() == 2));
        assert_eq!(submasks_of_size(mask, 0).collect::<Vec<_>>(), vec![0]);
    }
}
