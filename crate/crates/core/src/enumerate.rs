//! Exhaustive digraph enumeration.
//!
//! Labelled mode maps an index `i < 2^(n(n-1))` to a digraph: bit `k` of `i`
//! is the `k`-th ordered pair `(u, v)`, `u != v`, in row-major order. The
//! index space can be cut into contiguous shards.
//!
//! Canonical mode keeps one representative per isomorphism class. The
//! canonical code of a digraph is the minimum, over all `n!` relabellings, of
//! its adjacency bit string read in "vertex-prefix" pair order
//! `(0,1) (1,0) (0,2) (2,0) (1,2) (2,1) (0,3) ...`, first pair most
//! significant. That order makes every prefix depend only on the first few
//! placed vertices, so the minimisation is a branch-and-bound over partial
//! permutations rather than a flat scan.

use std::ops::Range;

use rayon::prelude::*;

use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};

/// Largest `n` for labelled exhaustive enumeration.
pub const MAX_LABELED_N: usize = 5;
/// Largest `n` for canonical (isomorphism-reduced) enumeration.
pub const MAX_CANONICAL_N: usize = 6;
/// Largest `n` the canonical code fits in a `u64` for.
pub const MAX_CANONICAL_FORM_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    SinkFree,
}

impl Filter {
    pub fn accepts(self, d: &Digraph) -> bool {
        match self {
            Filter::All => true,
            Filter::SinkFree => d.is_sink_free(),
        }
    }
}

/// Row-major ordered pairs `(u, v)` with `u != v`.
pub fn labeled_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}

/// The labelled digraph with enumeration index `index`.
pub fn labeled_digraph(n: usize, index: u64) -> Digraph {
    let mut rows = [0u64; MAX_LABELED_N + 1];
    let mut k = 0;
    for (u, row) in rows.iter_mut().enumerate().take(n) {
        for v in 0..n {
            if v != u {
                if (index >> k) & 1 == 1 {
                    *row |= 1 << v;
                }
                k += 1;
            }
        }
    }
    Digraph::from_out_rows(&rows[..n]).expect("labelled index in range")
}

/// Inverse of [`labeled_digraph`].
pub fn labeled_index(d: &Digraph) -> Option<u64> {
    if d.n() > MAX_LABELED_N + 1 {
        return None;
    }
    let mut idx = 0u64;
    for (k, (u, v)) in labeled_pairs(d.n()).into_iter().enumerate() {
        if d.has_arc(u, v) {
            idx |= 1 << k;
        }
    }
    Some(idx)
}

fn prefix_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for k in 1..n {
        for i in 0..k {
            out.push((i, k));
            out.push((k, i));
        }
    }
    out
}

/// Canonical code and the permutation achieving it (`perm[old] = new`).
pub fn canonical_code(d: &Digraph) -> Result<(u64, Vec<usize>)> {
    let n = d.n();
    if n > MAX_CANONICAL_FORM_N {
        return Err(Error::BudgetExceeded(format!(
            "canonical form needs n <= {MAX_CANONICAL_FORM_N}, got {n}"
        )));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let total = n * (n - 1);
    let mut search = CanonSearch {
        d,
        n,
        total,
        best: u64::MAX,
        best_order: Vec::new(),
        order: Vec::with_capacity(n),
    };
    search.place(VertexSet::full(n), 0, 0);
    let mut perm = vec![0; n];
    for (new, &old) in search.best_order.iter().enumerate() {
        perm[old] = new;
    }
    Ok((search.best, perm))
}

struct CanonSearch<'a> {
    d: &'a Digraph,
    n: usize,
    total: usize,
    best: u64,
    best_order: Vec<usize>,
    order: Vec<usize>,
}

impl CanonSearch<'_> {
    // `prefix` holds `len` leading code bits for the vertices placed so far.
    fn place(&mut self, left: VertexSet, prefix: u64, len: usize) {
        let k = self.order.len();
        if k == self.n {
            if prefix < self.best {
                self.best = prefix;
                self.best_order = self.order.clone();
            }
            return;
        }
        for v in left.iter() {
            let mut p = prefix;
            for &u in &self.order {
                p = (p << 1) | self.d.has_arc(u, v) as u64;
                p = (p << 1) | self.d.has_arc(v, u) as u64;
            }
            let plen = len + 2 * k;
            if self.best != u64::MAX {
                let best_prefix = if plen == 0 { 0 } else { self.best >> (self.total - plen) };
                if p > best_prefix {
                    continue;
                }
            }
            self.order.push(v);
            self.place(left.without(v), p, plen);
            self.order.pop();
        }
    }
}

/// Decodes a canonical code back into its representative digraph.
pub fn from_canonical_code(n: usize, code: u64) -> Digraph {
    let pairs = prefix_pairs(n);
    let total = pairs.len();
    let mut rows = vec![0u64; n];
    for (pos, (u, v)) in pairs.into_iter().enumerate() {
        if (code >> (total - 1 - pos)) & 1 == 1 {
            rows[u] |= 1 << v;
        }
    }
    Digraph::from_out_rows(&rows).expect("valid canonical code")
}

/// The canonical representative of `d`'s isomorphism class.
pub fn canonical_form(d: &Digraph) -> Result<Digraph> {
    let (code, _) = canonical_code(d)?;
    Ok(from_canonical_code(d.n(), code))
}

/// Sorted canonical codes of all digraphs on `n` vertices, one per
/// isomorphism class. Built by extending each class on `n - 1` vertices with
/// a new vertex in every possible way; every digraph on `n` vertices arises
/// this way from the class of its first `n - 1` vertices.
pub fn canonical_codes(n: usize) -> Result<Vec<u64>> {
    if n > MAX_CANONICAL_N {
        return Err(Error::BudgetExceeded(format!(
            "canonical enumeration supports n <= {MAX_CANONICAL_N}, got {n}"
        )));
    }
    let mut reps = vec![0u64];
    for m in 1..=n {
        let prev = m - 1;
        let ext = 1u64 << (2 * prev);
        let mut codes: Vec<u64> = reps
            .par_iter()
            .flat_map_iter(|&code| {
                let base = from_canonical_code(prev, code);
                (0..ext).map(move |mask| {
                    let mut rows: Vec<u64> = base.out_rows().to_vec();
                    rows.push(0);
                    for u in 0..prev {
                        if (mask >> u) & 1 == 1 {
                            rows[u] |= 1 << prev;
                        }
                        if (mask >> (prev + u)) & 1 == 1 {
                            rows[prev] |= 1 << u;
                        }
                    }
                    let d = Digraph::from_out_rows(&rows).expect("extension");
                    canonical_code(&d).expect("within budget").0
                })
            })
            .collect();
        codes.par_sort_unstable();
        codes.dedup();
        reps = codes;
    }
    Ok(reps)
}

/// A deterministic, index-addressable stream of digraphs on `n` vertices.
#[derive(Debug, Clone)]
pub struct Enumeration {
    n: usize,
    filter: Filter,
    canonical: Option<Vec<u64>>,
}

impl Enumeration {
    pub fn new(n: usize, filter: Filter, canonical: bool) -> Result<Self> {
        let canonical = if canonical {
            Some(canonical_codes(n)?)
        } else {
            if n > MAX_LABELED_N {
                return Err(Error::BudgetExceeded(format!(
                    "labelled enumeration supports n <= {MAX_LABELED_N}, got {n}"
                )));
            }
            None
        };
        Ok(Enumeration {
            n,
            filter,
            canonical,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn filter(&self) -> Filter {
        self.filter
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical.is_some()
    }

    /// Size of the index space, before filtering.
    pub fn total(&self) -> u64 {
        match &self.canonical {
            Some(codes) => codes.len() as u64,
            None => 1u64 << (self.n * self.n.saturating_sub(1)),
        }
    }

    /// The digraph at `index`, or `None` if the filter rejects it.
    pub fn get(&self, index: u64) -> Option<Digraph> {
        let d = match &self.canonical {
            Some(codes) => from_canonical_code(self.n, *codes.get(index as usize)?),
            None => {
                if index >= self.total() {
                    return None;
                }
                labeled_digraph(self.n, index)
            }
        };
        self.filter.accepts(&d).then_some(d)
    }

    pub fn iter_range(&self, range: Range<u64>) -> impl Iterator<Item = (u64, Digraph)> + '_ {
        range.filter_map(move |i| self.get(i).map(|d| (i, d)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Digraph)> + '_ {
        self.iter_range(0..self.total())
    }
}

/// Contiguous index range owned by shard `index` of `count`.
pub fn shard_range(total: u64, count: u64, index: u64) -> Result<Range<u64>> {
    if count == 0 || index >= count {
        return Err(Error::InvalidArgument(format!(
            "shard {index} of {count} is not a valid shard"
        )));
    }
    let lo = (total as u128 * index as u128 / count as u128) as u64;
    let hi = (total as u128 * (index as u128 + 1) / count as u128) as u64;
    Ok(lo..hi)
}

/// Streams every digraph on `n` vertices (or one per isomorphism class).
pub fn enumerate_digraphs(
    n: usize,
    filter: Filter,
    canonical: bool,
) -> Result<impl Iterator<Item = Digraph>> {
    let e = Enumeration::new(n, filter, canonical)?;
    Ok((0..e.total()).filter_map(move |i| e.get(i)))
}
