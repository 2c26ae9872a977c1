//! Lower-bound constructions, each emitted together with a certificate whose
//! measured values are recomputed from the emitted hypergraph.

use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{binomial, combinations};
use crate::error::{Error, Result};
use crate::factor::exact_factor;
use crate::hypergraph::Hypergraph;
use crate::independence::independence_number;
use crate::pattern::{copy_vertex_sets, Pattern};
use crate::vertex_set::VertexSet;

/// Parameters of a construction. Generation is a pure function of this.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionSpec {
    Parity { k: usize, n: usize },
    SpaceBarrier { k: usize, t: usize, n: usize },
    Pikhurko { t: usize, n: usize, lambda: usize, h0_order: usize, h0_edges: Vec<Vec<usize>> },
    MultipartiteGraph { t: usize, n: usize, balanced: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Exhaustive oracle run; definitive.
    Oracle,
    /// Counting or parity argument, checked on the enumerated copies.
    StructuralArgument,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorVerdict {
    pub provenance: Provenance,
    /// `Some(true)` when the host provably has no factor.
    pub factor_free: Option<bool>,
    pub oracle_factor_free: Option<bool>,
    pub structural_factor_free: Option<bool>,
}

impl FactorVerdict {
    fn new(oracle: Option<bool>, structural: Option<bool>) -> Self {
        let (provenance, factor_free) = match (oracle, structural) {
            (Some(o), _) => (Provenance::Oracle, Some(o)),
            (None, Some(s)) => (Provenance::StructuralArgument, Some(s)),
            (None, None) => (Provenance::Unchecked, None),
        };
        FactorVerdict { provenance, factor_free, oracle_factor_free: oracle, structural_factor_free: structural }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl StructuralCheck {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        StructuralCheck { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub spec: ConstructionSpec,
    pub n: usize,
    pub k: usize,
    pub pattern: String,
    pub parts: Vec<usize>,
    pub edge_count: usize,
    /// The claimed lower bound on δ_{k−1}, when a claim applies.
    pub claimed_min_codegree: Option<i64>,
    pub measured_min_codegree: usize,
    pub claim_met: Option<bool>,
    pub pattern_divides_n: bool,
    pub verdict: FactorVerdict,
    pub checks: Vec<StructuralCheck>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&StructuralCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest-remainder apportionment of `n` by `weights`; ties go to the lower
/// index.
pub fn apportion(n: usize, weights: &[usize]) -> Vec<usize> {
    let total: usize = weights.iter().sum();
    assert!(total > 0, "weights must not all be zero");
    let mut sizes: Vec<usize> = weights.iter().map(|&w| n * w / total).collect();
    let mut rem: Vec<(usize, usize)> = weights.iter().enumerate().map(|(i, &w)| (n * w % total, i)).collect();
    rem.sort_by_key(|&(r, i)| (std::cmp::Reverse(r), i));
    let short = n - sizes.iter().sum::<usize>();
    for &(_, i) in rem.iter().take(short) {
        sizes[i] += 1;
    }
    sizes
}

fn part_of(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat(i).take(s)).collect()
}

fn part_sets(sizes: &[usize]) -> Vec<VertexSet> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let set = (start..start + s).collect();
            start += s;
            set
        })
        .collect()
}

/// Oracle verdict `Some(factor_free)`, or `None` with a note when the run
/// is out of reach.
fn oracle_verdict(h: &Hypergraph, pattern: &Pattern, caps: &Caps, notes: &mut Vec<String>) -> Result<Option<bool>> {
    if h.n() % pattern.order() != 0 {
        return Ok(Some(true));
    }
    if h.n() > caps.oracle {
        notes.push(format!("n = {} exceeds the oracle cap {}", h.n(), caps.oracle));
        return Ok(None);
    }
    match exact_factor(h, pattern, caps) {
        Ok(t) => Ok(Some(t.is_none())),
        Err(Error::CapExceeded { what, value, cap }) => {
            notes.push(format!("oracle skipped: {what} = {value} exceeds {cap}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Copies of `pattern` as vertex sets, when enumeration is within caps.
fn enumerated_copies(h: &Hypergraph, pattern: &Pattern, caps: &Caps) -> Option<Vec<VertexSet>> {
    if h.n() > caps.oracle.min(64) {
        return None;
    }
    copy_vertex_sets(h, pattern).ok().map(|v| v.into_iter().map(|(m, _)| VertexSet::from_mask(m)).collect())
}

fn claim_met(claimed: Option<i64>, measured: usize) -> Option<bool> {
    claimed.map(|c| measured as i64 >= c)
}

// ---------------------------------------------------------------- parity

fn parity_sizes(n: usize) -> Vec<usize> {
    let mut sizes = apportion(n, &[1, 1, 1]);
    if sizes[0] % 2 == sizes[1] % 2 {
        if sizes[2] < sizes[0] {
            sizes[0] -= 1;
            sizes[2] += 1;
        } else {
            sizes[0] += 1;
            sizes[2] -= 1;
        }
    }
    sizes
}

fn parity_rule(e: &[usize], part: &[usize]) -> bool {
    let mut counts = [0usize; 3];
    for &v in e {
        counts[part[v]] += 1;
    }
    counts.iter().any(|c| c % 2 == 1)
}

/// Three near-equal parts with `|V₁| ≢ |V₂| (mod 2)`; a k-set is an edge
/// when it meets some part in an odd number of vertices.
pub fn parity_construction(k: usize, n: usize, caps: &Caps) -> Result<(Hypergraph, Certificate)> {
    let spec = ConstructionSpec::Parity { k, n };
    validate(&spec, caps)?;
    let part = part_of(&parity_sizes(n));
    let all: Vec<usize> = (0..n).collect();
    let h = Hypergraph::from_canonical(n, k, combinations(&all, k).filter(|e| parity_rule(e, &part)).collect());
    let cert = certify(&h, &spec, caps)?;
    Ok((h, cert))
}

fn certify_parity(h: &Hypergraph, k: usize, n: usize, caps: &Caps) -> Result<Certificate> {
    let sizes = parity_sizes(n);
    let part = part_of(&sizes);
    let parts = part_sets(&sizes);
    let pattern = Pattern::complete(k + 1, k)?;
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    let mismatch = sizes[0] % 2 != sizes[1] % 2;
    checks.push(StructuralCheck::new("part_parity", mismatch, format!("parts {sizes:?}")));

    let all: Vec<usize> = (0..n).collect();
    let wrong = combinations(&all, k).find(|e| parity_rule(e, &part) != h.has_edge(e));
    checks.push(StructuralCheck::new(
        "edges_follow_rule",
        wrong.is_none(),
        match &wrong {
            None => "every k-set is an edge exactly when it meets some part oddly".to_string(),
            Some(e) => format!("k-set {e:?} disagrees with the rule"),
        },
    ));

    let copies = enumerated_copies(h, &pattern, caps);
    let all_odd = copies.as_ref().map(|cs| {
        let bad = cs.iter().find(|c| parts.iter().any(|p| c.intersection(p).len() % 2 == 0));
        checks.push(StructuralCheck::new(
            "copies_meet_every_part_oddly",
            bad.is_none(),
            match bad {
                None => format!("{} copies of {pattern} enumerated", cs.len()),
                Some(c) => format!("copy {:?} meets some part evenly", c.to_vec()),
            },
        ));
        bad.is_none()
    });
    if all_odd.is_none() {
        notes.push("copies not enumerated: n above the oracle cap".into());
    }
    let structural = all_odd.map(|odd| odd && mismatch).filter(|&b| b);

    let claimed = if k >= 4 && k % 2 == 0 {
        Some((2 * n as i64 + 2) / 3 - 1)
    } else {
        notes.push(format!("no codegree claim applies for k = {k}"));
        None
    };
    let measured = h.min_l_degree(k - 1)?;
    let oracle = oracle_verdict(h, &pattern, caps, &mut notes)?;
    Ok(Certificate {
        spec: ConstructionSpec::Parity { k, n },
        n,
        k,
        pattern: pattern.to_string(),
        parts: sizes,
        edge_count: h.edge_count(),
        claimed_min_codegree: claimed,
        measured_min_codegree: measured,
        claim_met: claim_met(claimed, measured),
        pattern_divides_n: n % (k + 1) == 0,
        verdict: FactorVerdict::new(oracle, structural),
        checks,
        notes,
    })
}

// ---------------------------------------------------------- space barrier

fn barrier_size(k: usize, t: usize, n: usize) -> usize {
    (t - k + 1) * n / t - 1
}

/// All k-sets meeting `W = {0, …, |W|−1}`, `|W| = (t−k+1)n/t − 1`.
pub fn space_barrier(k: usize, t: usize, n: usize, caps: &Caps) -> Result<(Hypergraph, Certificate)> {
    let spec = ConstructionSpec::SpaceBarrier { k, t, n };
    validate(&spec, caps)?;
    let w = barrier_size(k, t, n);
    let all: Vec<usize> = (0..n).collect();
    let h = Hypergraph::from_canonical(n, k, combinations(&all, k).filter(|e| e[0] < w).collect());
    let cert = certify(&h, &spec, caps)?;
    Ok((h, cert))
}

fn certify_space_barrier(h: &Hypergraph, k: usize, t: usize, n: usize, caps: &Caps) -> Result<Certificate> {
    let w = barrier_size(k, t, n);
    let pattern = Pattern::complete(t, k)?;
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    let stray = h.edges().iter().find(|e| e[0] >= w);
    checks.push(StructuralCheck::new(
        "edges_meet_w",
        stray.is_none(),
        match stray {
            None => format!("|W| = {w}"),
            Some(e) => format!("edge {e:?} avoids W"),
        },
    ));
    let missing = {
        let all: Vec<usize> = (0..n).collect();
        combinations(&all, k).find(|e| e[0] < w && !h.has_edge(e))
    };
    checks.push(StructuralCheck::new(
        "all_sets_meeting_w_present",
        missing.is_none(),
        missing.map_or(String::new(), |e| format!("k-set {e:?} meets W but is missing")),
    ));
    let need = t - k + 1;
    let counting = (n / t) * need > w;
    checks.push(StructuralCheck::new(
        "counting",
        counting,
        format!("{} copies × {need} vertices of W each > |W| = {w}", n / t),
    ));
    if let Some(cs) = enumerated_copies(h, &pattern, caps) {
        let min_in_w = cs.iter().map(|c| c.iter().filter(|&v| v < w).count()).min();
        let ok = min_in_w.is_none_or(|m| m >= need);
        checks.push(StructuralCheck::new(
            "copies_use_w",
            ok,
            format!("{} copies, fewest vertices in W = {:?}, need {need}", cs.len(), min_in_w),
        ));
    } else {
        notes.push("copies not enumerated: n above the oracle cap".into());
    }
    let structural = (stray.is_none() && counting).then_some(true);

    let claimed = ((t - k + 1) * n / t) as i64 - k as i64 + 2;
    let measured = h.min_l_degree(k - 1)?;
    let oracle = oracle_verdict(h, &pattern, caps, &mut notes)?;
    Ok(Certificate {
        spec: ConstructionSpec::SpaceBarrier { k, t, n },
        n,
        k,
        pattern: pattern.to_string(),
        parts: vec![w, n - w],
        edge_count: h.edge_count(),
        claimed_min_codegree: Some(claimed),
        measured_min_codegree: measured,
        claim_met: claim_met(Some(claimed), measured),
        pattern_divides_n: true,
        verdict: FactorVerdict::new(oracle, structural),
        checks,
        notes,
    })
}

// --------------------------------------------------------------- pikhurko

fn nearly_equal(a0: usize, rest: &[usize], lambda: usize) -> bool {
    let lo = rest.iter().min().copied().unwrap_or(0);
    let hi = rest.iter().max().copied().unwrap_or(0);
    hi - lo <= 1 && rest.iter().all(|&a| (a0 as i64 - (lambda * a) as i64).unsigned_abs() as usize <= lambda)
}

/// Sizes `a₀, a₁, …, a_l`, plus a note when the rounding needed a choice.
fn pikhurko_sizes(n: usize, l: usize, lambda: usize) -> (Vec<usize>, Vec<String>) {
    let mut weights = vec![1; l + 1];
    weights[0] = lambda;
    let mut sizes = apportion(n, &weights);
    let mut notes = Vec::new();
    if sizes[0] % 2 == 0 {
        let mut down = sizes.clone();
        let mut up = sizes.clone();
        let down_ok = sizes[0] > 0 && {
            let i = 1 + (0..l).min_by_key(|&i| (sizes[1 + i], i)).unwrap();
            down[0] -= 1;
            down[i] += 1;
            nearly_equal(down[0], &down[1..], lambda)
        };
        let up_ok = {
            let i = 1 + (0..l).min_by_key(|&i| (std::cmp::Reverse(sizes[1 + i]), i)).unwrap();
            sizes[i] > 0 && {
                up[0] += 1;
                up[i] -= 1;
                nearly_equal(up[0], &up[1..], lambda)
            }
        };
        sizes = match (down_ok, up_ok) {
            (true, _) => down,
            (false, true) => up,
            (false, false) => {
                notes.push("no ±1 adjustment keeps the parts nearly equal".into());
                if sizes[0] > 0 { down } else { up }
            }
        };
    }
    if sizes[0] % lambda != 0 {
        notes.push(format!("λ = {lambda} does not divide a₀ = {}; largest-remainder rounding used", sizes[0]));
    }
    (sizes, notes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    A,
    B,
    C,
}

/// Rules satisfied by a triple of the pre-complement.
fn pikhurko_rules(e: &[usize], part: &[usize], h0: &Hypergraph) -> Vec<Rule> {
    let mut p: Vec<usize> = e.iter().map(|&v| part[v]).collect();
    p.sort_unstable();
    let mut out = Vec::new();
    if p == [0, 0, 0] {
        out.push(Rule::A);
    }
    if p[0] == 0 && p[1] >= 1 && p[1] == p[2] {
        out.push(Rule::B);
    }
    if p[0] >= 1 && p[0] < p[1] && p[1] < p[2] && h0.has_edge(&[p[0] - 1, p[1] - 1, p[2] - 1]) {
        out.push(Rule::C);
    }
    out
}

fn first_heavy_pair(h0: &Hypergraph, lambda: usize) -> Option<(usize, usize, usize)> {
    let l = h0.n();
    (0..l)
        .flat_map(|a| (a + 1..l).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, h0.edges().iter().filter(|e| e.contains(&a) && e.contains(&b)).count()))
        .find(|&(_, _, c)| c > lambda)
}

fn check_h0(h0: &Hypergraph, t: usize, lambda: usize, caps: &Caps) -> Result<(usize, usize)> {
    if h0.k() != 3 {
        return Err(Error::UniformityMismatch { pattern_k: 3, host_k: h0.k() });
    }
    if let Some((a, b, c)) = first_heavy_pair(h0, lambda) {
        return Err(Error::Precondition(format!(
            "pair {{{a}, {b}}} of H0 lies in {c} edges, more than λ = {lambda}"
        )));
    }
    let alpha = independence_number(h0, caps);
    if !alpha.exact {
        return Err(Error::Precondition(format!(
            "independence number of H0 (order {}) cannot be computed exactly",
            h0.n()
        )));
    }
    if alpha.size >= t - 1 {
        let set: Vec<usize> = alpha.witness.iter().take(t - 1).collect();
        return Err(Error::Precondition(format!(
            "H0 has an independent set {set:?} of size {}, not below t − 1 = {}",
            t - 1,
            t - 1
        )));
    }
    let delta2 = h0.max_l_degree(2)?;
    Ok((delta2, alpha.size))
}

fn pikhurko_spec(t: usize, n: usize, lambda: usize, h0: &Hypergraph) -> ConstructionSpec {
    ConstructionSpec::Pikhurko { t, n, lambda, h0_order: h0.n(), h0_edges: h0.edges().to_vec() }
}

/// Complement of the 3-graph assembled from parts `A₀, …, A_l` by the three
/// rules, driven by the 3-graph `h0` on `l` vertices.
pub fn pikhurko_construction(
    t: usize,
    n: usize,
    lambda: usize,
    h0: &Hypergraph,
    caps: &Caps,
) -> Result<(Hypergraph, Certificate)> {
    let spec = pikhurko_spec(t, n, lambda, h0);
    validate(&spec, caps)?;
    check_h0(h0, t, lambda, caps)?;
    let (sizes, _) = pikhurko_sizes(n, h0.n(), lambda);
    let part = part_of(&sizes);
    let all: Vec<usize> = (0..n).collect();
    let pre = Hypergraph::from_canonical(
        n,
        3,
        combinations(&all, 3).filter(|e| !pikhurko_rules(e, &part, h0).is_empty()).collect(),
    );
    let h = pre.complement();
    let cert = certify(&h, &spec, caps)?;
    Ok((h, cert))
}

fn certify_pikhurko(h: &Hypergraph, t: usize, n: usize, lambda: usize, h0: &Hypergraph, caps: &Caps) -> Result<Certificate> {
    let (delta2_h0, alpha_h0) = check_h0(h0, t, lambda, caps)?;
    let l = h0.n();
    let (sizes, mut notes) = pikhurko_sizes(n, l, lambda);
    let part = part_of(&sizes);
    let pattern = Pattern::complete(t, 3)?;
    let mut checks = vec![
        StructuralCheck::new("h0_codegree", delta2_h0 <= lambda, format!("Δ₂(H0) = {delta2_h0}, λ = {lambda}")),
        StructuralCheck::new("h0_independence", alpha_h0 < t - 1, format!("α(H0) = {alpha_h0} (exact), t − 1 = {}", t - 1)),
        StructuralCheck::new("a0_odd", sizes[0] % 2 == 1, format!("parts {sizes:?}")),
        StructuralCheck::new("nearly_equal", nearly_equal(sizes[0], &sizes[1..], lambda), format!("parts {sizes:?}")),
    ];

    let pre = h.complement();
    let all: Vec<usize> = (0..n).collect();
    let mut bad = None;
    for e in combinations(&all, 3) {
        let rules = pikhurko_rules(&e, &part, h0);
        if rules.len() > 1 || rules.is_empty() == pre.has_edge(&e) {
            bad = Some((e, rules));
            break;
        }
    }
    checks.push(StructuralCheck::new(
        "rules_exclusive",
        bad.is_none(),
        match &bad {
            None => format!("each of the {} complement edges satisfies exactly one rule", pre.edge_count()),
            Some((e, r)) => format!("triple {e:?} satisfies rules {r:?} but edge status disagrees"),
        },
    ));

    let a0: VertexSet = (0..sizes[0]).collect();
    let even = enumerated_copies(h, &pattern, caps).map(|cs| {
        let odd = cs.iter().find(|c| c.intersection(&a0).len() % 2 == 1);
        checks.push(StructuralCheck::new(
            "copies_meet_a0_evenly",
            odd.is_none(),
            match odd {
                None => format!("{} copies of {pattern} enumerated", cs.len()),
                Some(c) => format!("copy {:?} meets A0 oddly", c.to_vec()),
            },
        ));
        odd.is_none()
    });
    if even.is_none() {
        notes.push("copies not enumerated: n above the oracle cap".into());
    }
    let structural = even.map(|e| e && sizes[0] % 2 == 1).filter(|&b| b);

    // Δ₂ of the pre-complement from the part sizes alone.
    let a = &sizes[1..];
    let mut delta_pre = sizes[0].saturating_sub(2);
    for i in 0..l {
        if a[i] >= 2 {
            delta_pre = delta_pre.max(sizes[0]);
        }
        if a[i] >= 1 && sizes[0] >= 1 {
            delta_pre = delta_pre.max(a[i] - 1);
        }
        for j in i + 1..l {
            if a[i] >= 1 && a[j] >= 1 {
                let s: usize = (0..l).filter(|&x| h0.has_edge(&[i, j, x])).map(|x| a[x]).sum();
                delta_pre = delta_pre.max(s);
            }
        }
    }
    notes.push("claimed codegree is n − 2 − Δ₂ of the pre-complement, computed from the part sizes".into());
    let claimed = n as i64 - 2 - delta_pre as i64;
    let measured = h.min_l_degree(2)?;
    let oracle = oracle_verdict(h, &pattern, caps, &mut notes)?;
    Ok(Certificate {
        spec: pikhurko_spec(t, n, lambda, h0),
        n,
        k: 3,
        pattern: pattern.to_string(),
        parts: sizes,
        edge_count: h.edge_count(),
        claimed_min_codegree: Some(claimed),
        measured_min_codegree: measured,
        claim_met: claim_met(Some(claimed), measured),
        pattern_divides_n: true,
        verdict: FactorVerdict::new(oracle, structural),
        checks,
        notes,
    })
}

// ------------------------------------------------------------ multipartite

fn multipartite_sizes(t: usize, n: usize, balanced: bool) -> Vec<usize> {
    let mut sizes = vec![n / t; t];
    if !balanced {
        sizes[0] -= 1;
        sizes[t - 1] += 1;
    }
    sizes
}

/// Complete t-partite graph with parts `n/t − 1, n/t, …, n/t, n/t + 1`, or
/// all parts equal when `balanced`.
pub fn multipartite_graph_extremal(t: usize, n: usize, balanced: bool, caps: &Caps) -> Result<(Hypergraph, Certificate)> {
    let spec = ConstructionSpec::MultipartiteGraph { t, n, balanced };
    validate(&spec, caps)?;
    let part = part_of(&multipartite_sizes(t, n, balanced));
    let all: Vec<usize> = (0..n).collect();
    let h = Hypergraph::from_canonical(n, 2, combinations(&all, 2).filter(|e| part[e[0]] != part[e[1]]).collect());
    let cert = certify(&h, &spec, caps)?;
    Ok((h, cert))
}

fn certify_multipartite(h: &Hypergraph, t: usize, n: usize, balanced: bool, caps: &Caps) -> Result<Certificate> {
    let sizes = multipartite_sizes(t, n, balanced);
    let part = part_of(&sizes);
    let pattern = Pattern::complete(t, 2)?;
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    let all: Vec<usize> = (0..n).collect();
    let wrong = combinations(&all, 2).find(|e| (part[e[0]] != part[e[1]]) != h.has_edge(e));
    checks.push(StructuralCheck::new(
        "complete_multipartite",
        wrong.is_none(),
        wrong.map_or(format!("parts {sizes:?}"), |e| format!("pair {e:?} disagrees")),
    ));
    let transversal = enumerated_copies(h, &pattern, caps).map(|cs| {
        let bad = cs.iter().find(|c| {
            let mut seen: Vec<usize> = c.iter().map(|v| part[v]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len() != t
        });
        checks.push(StructuralCheck::new(
            "copies_transversal",
            bad.is_none(),
            format!("{} copies of {pattern} enumerated", cs.len()),
        ));
        bad.is_none()
    });
    let unequal = sizes.iter().any(|&s| s != n / t);
    let structural = match transversal {
        Some(true) => Some(unequal),
        _ => None,
    };

    let base = ((t - 1) * n / t) as i64;
    let claimed = if balanced { base } else { base - 1 };
    let measured = h.min_l_degree(1)?;
    let oracle = oracle_verdict(h, &pattern, caps, &mut notes)?;
    Ok(Certificate {
        spec: ConstructionSpec::MultipartiteGraph { t, n, balanced },
        n,
        k: 2,
        pattern: pattern.to_string(),
        parts: sizes,
        edge_count: h.edge_count(),
        claimed_min_codegree: Some(claimed),
        measured_min_codegree: measured,
        claim_met: claim_met(Some(claimed), measured),
        pattern_divides_n: true,
        verdict: FactorVerdict::new(oracle, structural),
        checks,
        notes,
    })
}

// ------------------------------------------------------------------ shared

fn h0_of(order: usize, edges: &[Vec<usize>]) -> Result<Hypergraph> {
    Hypergraph::new(order, 3, edges.iter().cloned())
}

/// Parameter validation, run before any generation.
pub fn validate(spec: &ConstructionSpec, caps: &Caps) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    let (n, k) = match *spec {
        ConstructionSpec::Parity { k, n } => {
            if k < 3 {
                return bad(format!("parity construction needs k ≥ 3, got {k}"));
            }
            if n < k {
                return bad(format!("parity construction needs n ≥ k, got n = {n}, k = {k}"));
            }
            (n, k)
        }
        ConstructionSpec::SpaceBarrier { k, t, n } => {
            if k < 3 || t <= k {
                return bad(format!("space barrier needs t > k ≥ 3, got k = {k}, t = {t}"));
            }
            if n == 0 || n % t != 0 {
                return Err(Error::Divisibility { order: t, n });
            }
            if (t - k + 1) * n / t < 2 {
                return bad(format!("space barrier with k = {k}, t = {t}, n = {n} has empty W"));
            }
            (n, k)
        }
        ConstructionSpec::Pikhurko { t, n, lambda, h0_order, .. } => {
            if t < 3 || lambda == 0 {
                return bad(format!("pikhurko construction needs t ≥ 3 and λ ≥ 1, got t = {t}, λ = {lambda}"));
            }
            if h0_order < 3 {
                return bad(format!("H0 needs at least 3 vertices, got {h0_order}"));
            }
            if n == 0 || n % t != 0 {
                return Err(Error::Divisibility { order: t, n });
            }
            (n, 3)
        }
        ConstructionSpec::MultipartiteGraph { t, n, .. } => {
            if t < 2 {
                return bad(format!("multipartite construction needs t ≥ 2, got {t}"));
            }
            if n == 0 || n % t != 0 {
                return Err(Error::Divisibility { order: t, n });
            }
            (n, 2)
        }
    };
    Caps::check("k-sets enumerated by a construction", binomial(n as i64, k as i64) as usize, caps.design)
}

/// Recomputes the certificate of `spec` from `h` as given.
pub fn certify(h: &Hypergraph, spec: &ConstructionSpec, caps: &Caps) -> Result<Certificate> {
    validate(spec, caps)?;
    match spec {
        ConstructionSpec::Parity { k, n } => certify_parity(h, *k, *n, caps),
        ConstructionSpec::SpaceBarrier { k, t, n } => certify_space_barrier(h, *k, *t, *n, caps),
        ConstructionSpec::Pikhurko { t, n, lambda, h0_order, h0_edges } => {
            certify_pikhurko(h, *t, *n, *lambda, &h0_of(*h0_order, h0_edges)?, caps)
        }
        ConstructionSpec::MultipartiteGraph { t, n, balanced } => certify_multipartite(h, *t, *n, *balanced, caps),
    }
}

/// Builds the hypergraph described by `spec`.
pub fn build(spec: &ConstructionSpec, caps: &Caps) -> Result<(Hypergraph, Certificate)> {
    match spec {
        ConstructionSpec::Parity { k, n } => parity_construction(*k, *n, caps),
        ConstructionSpec::SpaceBarrier { k, t, n } => space_barrier(*k, *t, *n, caps),
        ConstructionSpec::Pikhurko { t, n, lambda, h0_order, h0_edges } => {
            pikhurko_construction(*t, *n, *lambda, &h0_of(*h0_order, h0_edges)?, caps)
        }
        ConstructionSpec::MultipartiteGraph { t, n, balanced } => multipartite_graph_extremal(*t, *n, *balanced, caps),
    }
}

/// The Fano plane on `0..7`.
pub fn fano_plane() -> Hypergraph {
    let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    Hypergraph::from_sets(7, 3, lines.iter().map(|l| l.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    /// Independent codegree scan over all (k−1)-sets.
    fn min_codegree_scan(h: &Hypergraph) -> usize {
        let all: Vec<usize> = (0..h.n()).collect();
        combinations(&all, h.k() - 1)
            .map(|s| (0..h.n()).filter(|v| !s.contains(v)).filter(|&v| {
                let mut e = s.clone();
                e.push(v);
                h.has_edge(&e)
            }).count())
            .min()
            .unwrap()
    }

    #[test]
    fn apportion_is_largest_remainder() {
        assert_eq!(apportion(10, &[1, 1, 1]), vec![4, 3, 3]);
        assert_eq!(apportion(11, &[1, 1, 1]), vec![4, 4, 3]);
        assert_eq!(apportion(12, &[1; 8]), vec![2, 2, 2, 2, 1, 1, 1, 1]);
        assert_eq!(apportion(10, &[3, 1]), vec![8, 2]);
    }

    #[test]
    fn parity_part_sizes() {
        assert_eq!(parity_sizes(10), vec![4, 3, 3]);
        assert_eq!(parity_sizes(12), vec![5, 4, 3]);
        assert_eq!(parity_sizes(15), vec![6, 5, 4]);
        for n in 4..40 {
            let s = parity_sizes(n);
            assert_eq!(s.iter().sum::<usize>(), n);
            assert_ne!(s[0] % 2, s[1] % 2);
            assert!(s.iter().max().unwrap() - s.iter().min().unwrap() <= 2);
        }
    }

    #[test]
    fn parity_k4_n10() {
        let (h, c) = parity_construction(4, 10, &caps()).unwrap();
        assert_eq!(c.parts, vec![4, 3, 3]);
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert_eq!(c.measured_min_codegree, 10 - 2 - 4);
        assert_eq!(c.claimed_min_codegree, Some(6));
        assert_eq!(c.verdict.oracle_factor_free, Some(true));
        assert_eq!(c.verdict.provenance, Provenance::Oracle);
        assert!(c.all_checks_pass(), "{:?}", c.checks);
        assert_eq!(c.verdict.structural_factor_free, Some(true));
    }

    #[test]
    fn parity_k4_n9_double_scan() {
        let (h, c) = parity_construction(4, 9, &caps()).unwrap();
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert!(!c.pattern_divides_n);
        assert!(c.all_checks_pass());
    }

    #[test]
    fn parity_odd_k_has_no_claim() {
        let (_, c) = parity_construction(3, 8, &caps()).unwrap();
        assert_eq!(c.claimed_min_codegree, None);
        assert_eq!(c.claim_met, None);
        assert!(parity_construction(4, 3, &caps()).is_err());
    }

    #[test]
    fn parity_copies_odd_exhaustive() {
        for n in 5..=14 {
            let (_, c) = parity_construction(4, n, &caps()).unwrap();
            assert!(c.check("copies_meet_every_part_oddly").unwrap().passed, "n = {n}");
        }
    }

    #[test]
    fn space_barrier_examples() {
        let (h, c) = space_barrier(3, 4, 12, &caps()).unwrap();
        assert_eq!(c.parts[0], 5);
        assert_eq!(c.measured_min_codegree, 5);
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert_eq!(c.claimed_min_codegree, Some(5));
        assert_eq!(c.verdict.oracle_factor_free, Some(true));
        assert!(c.all_checks_pass());

        let (_, c) = space_barrier(3, 4, 8, &caps()).unwrap();
        assert_eq!(c.parts[0], 3);
        assert_eq!(c.verdict.structural_factor_free, Some(true));
        assert_eq!(c.verdict.oracle_factor_free, Some(true));

        let (_, c) = space_barrier(4, 5, 10, &caps()).unwrap();
        assert_eq!(c.measured_min_codegree, 3);
        assert_eq!(c.claimed_min_codegree, Some(2));
    }

    #[test]
    fn space_barrier_preconditions() {
        assert!(space_barrier(3, 3, 12, &caps()).is_err());
        assert!(space_barrier(3, 4, 10, &caps()).is_err());
        assert!(space_barrier(2, 4, 12, &caps()).is_err());
    }

    #[test]
    fn multipartite_examples() {
        let (h, c) = multipartite_graph_extremal(3, 9, false, &caps()).unwrap();
        assert_eq!(c.parts, vec![2, 3, 4]);
        assert_eq!(c.measured_min_codegree, 5);
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert_eq!(c.verdict.factor_free, Some(true));

        let (_, c) = multipartite_graph_extremal(2, 4, false, &caps()).unwrap();
        assert_eq!(c.parts, vec![1, 3]);
        assert_eq!(c.verdict.factor_free, Some(true));

        let (_, c) = multipartite_graph_extremal(3, 9, true, &caps()).unwrap();
        assert_eq!(c.verdict.factor_free, Some(false));
        assert_eq!(c.verdict.structural_factor_free, Some(false));
        assert!(multipartite_graph_extremal(3, 10, false, &caps()).is_err());
    }

    #[test]
    fn pikhurko_fano() {
        let fano = fano_plane();
        let alpha = independence_number(&fano, &caps());
        let t = alpha.size + 2;
        let (h, c) = pikhurko_construction(t, 2 * t, 1, &fano, &caps()).unwrap();
        assert_eq!(c.parts[0] % 2, 1);
        assert_eq!(c.parts.iter().sum::<usize>(), 2 * t);
        assert!(c.all_checks_pass(), "{:?}", c.checks);
        assert_eq!(c.verdict.oracle_factor_free, Some(true));
        assert_eq!(c.verdict.structural_factor_free, Some(true));
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert_eq!(c.claimed_min_codegree, Some(c.measured_min_codegree as i64));
    }

    #[test]
    fn pikhurko_single_edge() {
        let h0 = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let (h, c) = pikhurko_construction(4, 8, 1, &h0, &caps()).unwrap();
        assert_eq!(c.measured_min_codegree, min_codegree_scan(&h));
        assert!(c.check("rules_exclusive").unwrap().passed);
    }

    #[test]
    fn pikhurko_preconditions_name_the_witness() {
        let h0 = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        let err = pikhurko_construction(6, 12, 1, &h0, &caps()).unwrap_err().to_string();
        assert!(err.contains("{1, 2}"), "{err}");
        let h0 = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let err = pikhurko_construction(3, 9, 1, &h0, &caps()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn tampering_changes_certificate() {
        let (h, c) = parity_construction(4, 10, &caps()).unwrap();
        let e = h.edges()[0].clone();
        let tampered = h.without_edges(&[e]);
        let c2 = certify(&tampered, &c.spec, &caps()).unwrap();
        assert_ne!(c, c2);
        assert!(!c2.check("edges_follow_rule").unwrap().passed);

        let (h, c) = space_barrier(3, 4, 8, &caps()).unwrap();
        let tampered = h.with_edges([vec![5, 6, 7]]).unwrap();
        let c2 = certify(&tampered, &c.spec, &caps()).unwrap();
        assert!(!c2.check("edges_meet_w").unwrap().passed);
        assert_ne!(c, c2);
    }

    #[test]
    fn deterministic() {
        let fano = fano_plane();
        let a = pikhurko_construction(6, 12, 1, &fano, &caps()).unwrap();
        let b = pikhurko_construction(6, 12, 1, &fano, &caps()).unwrap();
        assert_eq!(a, b);
    }
}
