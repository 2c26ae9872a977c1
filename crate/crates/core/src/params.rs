//! Exact closed-form parameters: `β(k,t,l)`, `l₀(k,t)`, `β(k,t)`, `d(k,t)`,
//! the clique weight `w` and the codegree threshold coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial_big, factorial_big};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest `t` accepted by the public functions.
pub const MAX_T: usize = 20;

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

fn c(a: usize, b: usize) -> BigInt {
    binomial_big(a as i64, b as i64).into()
}

fn check_kt(k: usize, t: usize) -> Result<()> {
    if k < 3 || t <= k || t > MAX_T {
        return Err(Error::InvalidParameter(format!(
            "need 3 <= k < t <= {MAX_T}, got k = {k}, t = {t}"
        )));
    }
    Ok(())
}

/// `β(k,t,l) = 2 / (C(t,k-1) + C(t-l-1,k-1) + C(l+1,k-1))`.
pub fn beta_ltl(k: usize, t: usize, l: usize) -> Result<Rational> {
    check_kt(k, t)?;
    if l >= t {
        return Err(Error::InvalidParameter(format!("l = {l} must be below t = {t}")));
    }
    let den = c(t, k - 1) + c(t - l - 1, k - 1) + c(l + 1, k - 1);
    Ok(rat(2, den))
}

/// Which of the three defining conditions of `l₀` hold at `l`.
pub fn l0_conditions(k: usize, t: usize, l: usize) -> Result<[bool; 3]> {
    check_kt(k, t)?;
    let fits = 2 * (l + 1) <= t;
    if l >= t {
        return Ok([false, false, false]);
    }
    let b = beta_ltl(k, t, l)?;
    let second = b <= rat(1, c(t - 1, k - 1) + c(l, k - 1));
    let c2 = c(2 * l + 1, k - 1);
    let third = c2.is_zero() || b <= rat(1, BigInt::from(2) * c2);
    Ok([fits, second, third])
}

/// `l₀(k,t)` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct L0 {
    pub value: usize,
    /// Largest `l` meeting the three defining conditions (1 for `k = 3`).
    pub literal: usize,
    /// `value` was raised to the guaranteed floor `⌊min{k, t-2}/2⌋`.
    pub clamped: bool,
}

pub fn l0_detail(k: usize, t: usize) -> Result<L0> {
    check_kt(k, t)?;
    if k == 3 {
        return Ok(L0 { value: 1, literal: 1, clamped: false });
    }
    let mut literal = 0;
    for l in 0..t {
        if l0_conditions(k, t, l)?.iter().all(|&ok| ok) {
            literal = l;
        }
    }
    let floor = k.min(t - 2) / 2;
    Ok(L0 { value: literal.max(floor), literal, clamped: floor > literal })
}

pub fn l0(k: usize, t: usize) -> Result<usize> {
    Ok(l0_detail(k, t)?.value)
}

pub fn beta(k: usize, t: usize) -> Result<Rational> {
    beta_ltl(k, t, l0(k, t)?)
}

/// `d(k,t) = 1 - C(t-1,k-1) β(k,t)`.
pub fn d_param(k: usize, t: usize) -> Result<Rational> {
    Ok(Rational::one() - Rational::from_integer(c(t - 1, k - 1)) * beta(k, t)?)
}

/// Clique weight `w(j)`: `w(0) = w(1) = 0` and
/// `w(j+1) - w(j) = 1 - (t-j+1)!/(t+1)!`.
pub fn weight_w(t: usize, j: usize) -> Result<Rational> {
    if t == 0 || t > MAX_T || j > t {
        return Err(Error::InvalidParameter(format!("weight w needs 0 <= j <= t <= {MAX_T}, got t = {t}, j = {j}")));
    }
    Ok(weight_table(t).swap_remove(j))
}

/// `w(0), .., w(t)`.
pub fn weight_table(t: usize) -> Vec<Rational> {
    let top = factorial_big(t as u64 + 1);
    let scaled = weight_table_scaled(t);
    scaled.into_iter().map(|s| rat(s, top.clone())).collect()
}

/// `w(0), .., w(t)` multiplied by `(t+1)!`, as exact integers.
pub fn weight_table_scaled(t: usize) -> Vec<i128> {
    assert!(t <= MAX_T, "t = {t} exceeds {MAX_T}");
    let fact = |m: usize| (1..=m as i128).product::<i128>();
    let top = fact(t + 1);
    let mut w = vec![0i128; t + 1];
    for j in 1..t {
        w[j + 1] = w[j] + top - fact(t - j + 1);
    }
    w
}

/// `w(i+1) + w(i'-1) >= 2 w(i)` for all `1 <= i' <= i <= t-1`; returns the
/// violating pairs `(i, i')`.
pub fn doubled_convexity_violations(t: usize) -> Vec<(usize, usize)> {
    let w = weight_table_scaled(t);
    let mut bad = Vec::new();
    for i in 1..t {
        for ip in 1..=i {
            if w[i + 1] + w[ip - 1] < 2 * w[i] {
                bad.push((i, ip));
            }
        }
    }
    bad
}

/// `w(i+1) + w(i'-1) >= w(i) + w(i')` for all `1 <= i' <= i <= t-1`: moving a
/// vertex from a part with clique size `i'` to one with `i >= i'` never loses
/// weight. Returns the violating pairs.
pub fn exchange_violations(t: usize) -> Vec<(usize, usize)> {
    let w = weight_table_scaled(t);
    let mut bad = Vec::new();
    for i in 1..t {
        for ip in 1..=i {
            if w[i + 1] + w[ip - 1] < w[i] + w[ip] {
                bad.push((i, ip));
            }
        }
    }
    bad
}

/// `1 - min{β(k,t), (t-1)/(t C(t-1,k-1))}`.
pub fn codegree_coefficient(k: usize, t: usize) -> Result<Rational> {
    let space = rat(t - 1, BigInt::from(t) * c(t - 1, k - 1));
    let b = beta(k, t)?;
    Ok(Rational::one() - b.min(space))
}

/// `1 - (k + 1_{k odd}) / (2k²)`, the bound for `t = k + 1`.
pub fn theorem13_coefficient(k: usize) -> Rational {
    let odd = k % 2;
    Rational::one() - rat(k + odd, 2 * k * k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub k: usize,
    pub t: usize,
    pub l0: usize,
    pub l0_literal: usize,
    pub beta: Rational,
    pub d: Rational,
    pub codegree_coefficient: Rational,
    /// Only for `t = k + 1`.
    pub theorem13_coefficient: Option<Rational>,
    /// Best available bound: the smaller of the two coefficients.
    pub coefficient: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TRule {
    KPlusOne,
    Fixed(usize),
}

pub fn threshold_row(k: usize, t: usize) -> Result<ThresholdRow> {
    let l = l0_detail(k, t)?;
    let codegree = codegree_coefficient(k, t)?;
    let thm13 = (t == k + 1).then(|| theorem13_coefficient(k));
    let coefficient = match &thm13 {
        Some(x) => x.clone().min(codegree.clone()),
        None => codegree.clone(),
    };
    Ok(ThresholdRow {
        k,
        t,
        l0: l.value,
        l0_literal: l.literal,
        beta: beta(k, t)?,
        d: d_param(k, t)?,
        codegree_coefficient: codegree,
        theorem13_coefficient: thm13,
        coefficient,
    })
}

/// Rows for `k = 3..=k_max`; rows with `t <= k` or `t > MAX_T` are skipped.
pub fn threshold_table(k_max: usize, rule: TRule) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    for k in 3..=k_max {
        let t = match rule {
            TRule::KPlusOne => k + 1,
            TRule::Fixed(t) => t,
        };
        if t <= k || t > MAX_T {
            continue;
        }
        rows.push(threshold_row(k, t)?);
    }
    Ok(rows)
}
