//! Exact solvers: kernels, quasi-kernels and their extremal versions,
//! kernel-perfectness, the kernel-perfect number, (di)chromatic numbers and
//! the heavy maximal independent set.
//!
//! Every optimiser walks independent sets only and breaks ties by the
//! numeric value of the vertex bitmask, so results are reproducible.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, PartKind, Partition, VertexSet};
use crate::error::{Error, Result};

/// Largest set whose kernel-perfectness is checked subset by subset.
pub const KERNEL_PERFECT_BUDGET: usize = 20;
/// Largest digraph for exact partition numbers.
pub const PARTITION_BUDGET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub witness: Option<VertexSet>,
    /// Size, `|N⁻[Q]|` or `|Q| + 2|N⁻(Q)|` depending on the solver.
    pub objective: usize,
    /// Set only after the witness passed an independent re-check.
    pub verified: bool,
}

impl SolveResult {
    pub fn none() -> Self {
        SolveResult {
            witness: None,
            objective: 0,
            verified: true,
        }
    }
}

/// Calls `f` on every independent subset of `within`.
pub fn for_each_independent_set<F: FnMut(VertexSet)>(d: &Digraph, within: VertexSet, mut f: F) {
    fn rec<F: FnMut(VertexSet)>(d: &Digraph, cand: VertexSet, cur: VertexSet, f: &mut F) {
        match cand.first() {
            None => f(cur),
            Some(v) => {
                let rest = cand.without(v);
                rec(d, rest, cur, f);
                rec(d, rest - d.out_row(v) - d.in_row(v), cur.with(v), f);
            }
        }
    }
    rec(d, within & d.vertices(), VertexSet::EMPTY, &mut f);
}

pub fn is_kernel(d: &Digraph, k: VertexSet) -> bool {
    is_kernel_within(d, d.vertices(), k)
}

/// `k` is a kernel of `D[t]`.
pub fn is_kernel_within(d: &Digraph, t: VertexSet, k: VertexSet) -> bool {
    k.is_subset(t)
        && d.is_independent(k)
        && (t - k).iter().all(|v| d.out_row(v).intersects(k))
}

/// Minimum-size kernel of `D[t]`, ties broken by smallest bitmask.
pub fn kernel_within(d: &Digraph, t: VertexSet) -> Option<VertexSet> {
    let mut best: Option<VertexSet> = None;
    for_each_independent_set(d, t, |k| {
        let better = match best {
            None => true,
            Some(b) => (k.len(), k.bits()) < (b.len(), b.bits()),
        };
        if better && (t - k).iter().all(|v| d.out_row(v).intersects(k)) {
            best = Some(k);
        }
    });
    best
}

/// Whether `D[t]` has any kernel, by backtracking with forced exclusions.
pub fn has_kernel_within(d: &Digraph, t: VertexSet) -> bool {
    fn search(d: &Digraph, t: VertexSet, k: VertexSet, x: VertexSet) -> bool {
        let open = t - k - x;
        for v in x.iter() {
            let out = d.out_row(v);
            if !out.intersects(k) && !out.intersects(open) {
                return false;
            }
        }
        match open.first() {
            None => true,
            Some(v) => {
                let nb = (d.out_row(v) | d.in_row(v)) & open;
                search(d, t, k.with(v), x | nb) || search(d, t, k, x.with(v))
            }
        }
    }
    search(d, t & d.vertices(), VertexSet::EMPTY, VertexSet::EMPTY)
}

/// Minimum-size kernel, or none.
pub fn find_kernel(d: &Digraph) -> SolveResult {
    match kernel_within(d, d.vertices()) {
        Some(k) => SolveResult {
            witness: Some(k),
            objective: k.len(),
            verified: is_kernel(d, k),
        },
        None => SolveResult::none(),
    }
}

pub fn is_quasi_kernel(d: &Digraph, q: VertexSet) -> bool {
    q.is_subset(d.vertices()) && d.is_independent(q) && d.n_minus_minus_closed(q) == d.vertices()
}

fn optimise<K: Ord>(d: &Digraph, key: impl Fn(VertexSet) -> K) -> VertexSet {
    let full = d.vertices();
    let mut best: Option<(K, VertexSet)> = None;
    for_each_independent_set(d, full, |q| {
        if d.n_minus_minus_closed(q) != full {
            return;
        }
        let k = key(q);
        if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
            best = Some((k, q));
        }
    });
    // every digraph has a quasi-kernel; reaching here empty is a bug
    best.expect("every digraph has a quasi-kernel").1
}

fn verified(d: &Digraph, q: VertexSet, objective: usize) -> SolveResult {
    SolveResult {
        witness: Some(q),
        objective,
        verified: is_quasi_kernel(d, q),
    }
}

/// Minimum-size quasi-kernel.
pub fn min_quasi_kernel(d: &Digraph) -> SolveResult {
    let q = optimise(d, |q| (q.len(), q.bits()));
    verified(d, q, q.len())
}

/// Quasi-kernel maximising `|N⁻[Q]|`.
pub fn max_large_quasi_kernel(d: &Digraph) -> SolveResult {
    let q = optimise(d, |q| (std::cmp::Reverse(d.n_minus_closed(q).len()), q.bits()));
    verified(d, q, d.n_minus_closed(q).len())
}

/// `|Q| + 2|N⁻(Q)|`, twice the sharp score.
pub fn sharp_score_doubled(d: &Digraph, q: VertexSet) -> usize {
    q.len() + 2 * d.n_minus_set(q).len()
}

/// Quasi-kernel maximising the doubled sharp score `|Q| + 2|N⁻(Q)|`.
pub fn max_sharp_quasi_kernel(d: &Digraph) -> SolveResult {
    let q = optimise(d, |q| (std::cmp::Reverse(sharp_score_doubled(d, q)), q.bits()));
    verified(d, q, sharp_score_doubled(d, q))
}

/// Drops vertices of `q`, highest first, while it stays a quasi-kernel.
/// Quasi-kernels are upward closed among independent sets, so one pass
/// leaves an inclusion-minimal one.
pub fn minimalize_quasi_kernel(d: &Digraph, q: VertexSet) -> Result<VertexSet> {
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    let mut cur = q;
    for v in q.iter().rev() {
        let smaller = cur.without(v);
        if d.n_minus_minus_closed(smaller) == d.vertices() {
            cur = smaller;
        }
    }
    Ok(cur)
}

/// Every induced subdigraph of `D[s]` has a kernel.
pub fn is_kernel_perfect(d: &Digraph, s: VertexSet) -> Result<bool> {
    if s.len() > KERNEL_PERFECT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "kernel-perfectness check on {} vertices (limit {KERNEL_PERFECT_BUDGET})",
            s.len()
        )));
    }
    Ok(s.subsets().all(|t| has_kernel_within(d, t)))
}

/// Memoised kernel-perfectness over subsets of one digraph. A set is
/// kernel-perfect iff it has a kernel and every one-vertex-smaller subset is
/// kernel-perfect.
pub struct KernelPerfectMemo<'a> {
    d: &'a Digraph,
    // 0 unknown, 1 yes, 2 no
    memo: Vec<u8>,
}

impl<'a> KernelPerfectMemo<'a> {
    pub fn new(d: &'a Digraph) -> Result<Self> {
        if d.n() > PARTITION_BUDGET + 4 {
            return Err(Error::BudgetExceeded(format!(
                "kernel-perfect memo on {} vertices",
                d.n()
            )));
        }
        let mut memo = vec![0u8; 1usize << d.n()];
        memo[0] = 1;
        Ok(KernelPerfectMemo { d, memo })
    }

    pub fn get(&mut self, s: VertexSet) -> bool {
        let idx = s.bits() as usize;
        match self.memo[idx] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        let ok = s.iter().all(|v| self.get(s.without(v))) && has_kernel_within(self.d, s);
        self.memo[idx] = if ok { 1 } else { 2 };
        ok
    }
}

/// Minimum number of parts in a partition of `0..n` whose parts satisfy a
/// hereditary predicate, by increasing `k` over restricted-growth strings.
fn min_hereditary_partition<P: FnMut(VertexSet) -> bool>(
    n: usize,
    mut ok: P,
) -> (usize, Vec<VertexSet>) {
    fn assign<P: FnMut(VertexSet) -> bool>(
        v: usize,
        n: usize,
        k: usize,
        parts: &mut Vec<VertexSet>,
        ok: &mut P,
    ) -> bool {
        if v == n {
            return true;
        }
        for i in 0..parts.len() {
            let grown = parts[i].with(v);
            if ok(grown) {
                parts[i] = grown;
                if assign(v + 1, n, k, parts, ok) {
                    return true;
                }
                parts[i] = parts[i].without(v);
            }
        }
        if parts.len() < k && ok(VertexSet::singleton(v)) {
            parts.push(VertexSet::singleton(v));
            if assign(v + 1, n, k, parts, ok) {
                return true;
            }
            parts.pop();
        }
        false
    }
    for k in 0..=n {
        let mut parts = Vec::with_capacity(k);
        if assign(0, n, k, &mut parts, &mut ok) {
            return (k, parts);
        }
    }
    unreachable!("singletons always form a valid partition")
}

fn check_partition_budget(d: &Digraph) -> Result<()> {
    if d.n() > PARTITION_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "exact partition numbers need n <= {PARTITION_BUDGET}, got {}",
            d.n()
        )));
    }
    Ok(())
}

/// Kernel-perfect number with a certifying partition; 0 for the null digraph.
pub fn kp_number(d: &Digraph) -> Result<(usize, Partition)> {
    check_partition_budget(d)?;
    let mut memo = KernelPerfectMemo::new(d)?;
    let (k, parts) = min_hereditary_partition(d.n(), |s| memo.get(s));
    Ok((k, Partition::new(d, PartKind::KernelPerfect, parts)?))
}

/// Chromatic number of the underlying graph, with a colouring.
pub fn chromatic_number(d: &Digraph) -> Result<(usize, Partition)> {
    check_partition_budget(d)?;
    let (k, parts) = min_hereditary_partition(d.n(), |s| d.is_independent(s));
    Ok((k, Partition::new(d, PartKind::Independent, parts)?))
}

/// Dichromatic number, with a partition into acyclic sets.
pub fn dichromatic_number(d: &Digraph) -> Result<(usize, Partition)> {
    check_partition_budget(d)?;
    let (k, parts) = min_hereditary_partition(d.n(), |s| d.is_acyclic_set(s));
    Ok((k, Partition::new(d, PartKind::Acyclic, parts)?))
}

/// Checks every part of `p` against its declared kind.
pub fn certify_partition(d: &Digraph, p: &Partition) -> Result<bool> {
    for &part in &p.parts {
        let ok = match p.kind {
            PartKind::Independent => d.is_independent(part),
            PartKind::Acyclic => d.is_acyclic_set(part),
            PartKind::KernelPerfect => is_kernel_perfect(d, part)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Node limit for the search behind [`heavy_independent_set`].
pub const HEAVY_SEARCH_BUDGET: u64 = 1 << 20;

/// A maximal independent set `I` with `|I| + 2|N⁻(I)| >= n`.
///
/// Repeatedly takes the smallest vertex whose in-degree is at least its
/// out-degree in what is left (one exists since in- and out-degrees sum to
/// the same total), then discards it with its out-neighbours and
/// in-neighbours. This guarantees `|N⁻(I)| >= |N⁺(I) \ N⁻(I)|` but not
/// `|N⁻(I)| >= |N⁺(I)|`: on `0->3, 1->2, 2->0` it picks `{0,1}` with
/// `N⁻ = {2}` and `N⁺ = {2,3}`. When that happens the maximal independent
/// sets are searched in ascending order for one with `|N⁻(I)| >= |N⁺(I)|`,
/// within [`HEAVY_SEARCH_BUDGET`] nodes; failing that the greedy set is
/// returned.
pub fn heavy_independent_set(d: &Digraph) -> Result<VertexSet> {
    let mut rest = d.vertices();
    let mut picked = VertexSet::EMPTY;
    while !rest.is_empty() {
        let v = rest
            .iter()
            .find(|&v| (d.in_row(v) & rest).len() >= (d.out_row(v) & rest).len())
            .ok_or_else(|| Error::post("heavy_independent_set", "no vertex with in >= out"))?;
        picked.insert(v);
        rest -= d.out_row(v) | d.in_row(v);
        rest.remove(v);
    }
    let n_minus = d.n_minus_set(picked);
    let balanced = n_minus.len() >= (d.n_plus_set(picked) - n_minus).len();
    if !(is_maximal_independent(d, picked) && balanced) {
        return Err(Error::post(
            "heavy_independent_set",
            format!("{picked} fails maximality or in/out balance"),
        ));
    }
    if is_strongly_heavy(d, picked) {
        return Ok(picked);
    }
    let mut nodes = 0;
    Ok(strong_search(d, VertexSet::EMPTY, d.vertices(), &mut nodes).unwrap_or(picked))
}

/// True if `s` is independent and every other vertex is adjacent to it.
pub fn is_maximal_independent(d: &Digraph, s: VertexSet) -> bool {
    d.is_independent(s)
        && (d.vertices() - s)
            .iter()
            .all(|v| (d.out_row(v) | d.in_row(v)).intersects(s))
}

fn is_strongly_heavy(d: &Digraph, s: VertexSet) -> bool {
    d.n_minus_set(s).len() >= d.n_plus_set(s).len()
}

// Depth-first over independent sets containing `chosen` drawn from `free`.
fn strong_search(d: &Digraph, chosen: VertexSet, free: VertexSet, nodes: &mut u64) -> Option<VertexSet> {
    *nodes += 1;
    if *nodes > HEAVY_SEARCH_BUDGET {
        return None;
    }
    if free.is_empty() {
        return (is_maximal_independent(d, chosen) && is_strongly_heavy(d, chosen)).then_some(chosen);
    }
    let v = free.iter().next()?;
    let mut without = free;
    without.remove(v);
    let mut with = without - (d.out_row(v) | d.in_row(v));
    with.remove(v);
    let mut taken = chosen;
    taken.insert(v);
    strong_search(d, taken, with, nodes).or_else(|| strong_search(d, chosen, without, nodes))
}
