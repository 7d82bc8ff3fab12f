//! Loop-free simple digraphs on at most 63 vertices, stored as out- and
//! in-adjacency bit rows, plus the vertex-set calculus everything else is
//! written in.
//!
//! Conventions used throughout the crate: a *sink* is a vertex with no
//! out-neighbor and a *source* is a vertex with no in-neighbor. `N⁻(S)` is
//! the set of vertices at distance exactly one from `S` (so it never meets
//! `S`), `N⁻[S]` adds `S` itself, and `N⁻⁻[S]` is everything within
//! distance two of `S`.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the vertex count so that a [`VertexSet`] fits in one word.
pub const MAX_VERTICES: usize = 63;

/// A set of vertices as a bit row. Bit `i` set means vertex `i` is a member.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All vertices `0..n`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub const fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub const fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1u64 << v))
    }

    #[inline]
    pub const fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member.
    #[inline]
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing order of the bit value.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

macro_rules! set_op {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, |$a:ident, $b:ident| $e:expr) => {
        impl $tr for VertexSet {
            type Output = VertexSet;
            #[inline]
            fn $m(self, rhs: VertexSet) -> VertexSet {
                let ($a, $b) = (self.0, rhs.0);
                VertexSet($e)
            }
        }
        impl $atr for VertexSet {
            #[inline]
            fn $am(&mut self, rhs: VertexSet) {
                *self = $tr::$m(*self, rhs);
            }
        }
    };
}

set_op!(BitOr, bitor, BitOrAssign, bitor_assign, |a, b| a | b);
set_op!(BitAnd, bitand, BitAndAssign, bitand_assign, |a, b| a & b);
set_op!(Sub, sub, SubAssign, sub_assign, |a, b| a & !b);

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for VertexIter {}

impl DoubleEndedIterator for VertexIter {
    fn next_back(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = 63 - self.0.leading_zeros() as usize;
        self.0 &= !(1u64 << v);
        Some(v)
    }
}

/// Submask enumeration in increasing numeric order.
pub struct SubsetIter {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(VertexSet(cur))
    }
}

/// Shortest directed path length, or no path at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A loop-free digraph with at most one arc per ordered pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: [u64; MAX_VERTICES],
    inn: [u64; MAX_VERTICES],
}

impl Digraph {
    /// The edgeless digraph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Self> {
        check_cap(n)?;
        Ok(Digraph {
            n,
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        })
    }

    /// The digraph with no vertices.
    pub fn null() -> Self {
        Digraph {
            n: 0,
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        }
    }

    /// Builds a digraph from an arc list. Self-loops, repeated arcs and
    /// out-of-range endpoints are errors.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::edgeless(n)?;
        for (u, v) in arcs {
            d.check_vertex(u)?;
            d.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if d.has_arc(u, v) {
                return Err(Error::DuplicateArc(u, v));
            }
            d.set_arc(u, v);
        }
        Ok(d)
    }

    /// Builds a digraph from out-adjacency rows; bits beyond `n` and on the
    /// diagonal are rejected.
    pub fn from_out_rows(rows: &[u64]) -> Result<Self> {
        let n = rows.len();
        let mut d = Digraph::edgeless(n)?;
        let full = VertexSet::full(n).bits();
        for (u, &row) in rows.iter().enumerate() {
            if row & !full != 0 {
                let v = (row & !full).trailing_zeros() as usize;
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if (row >> u) & 1 == 1 {
                return Err(Error::SelfLoop(u));
            }
            for v in VertexSet::from_bits(row).iter() {
                d.set_arc(u, v);
            }
        }
        Ok(d)
    }

    #[inline]
    pub(crate) fn set_arc(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.out[u] |= 1u64 << v;
        self.inn[v] |= 1u64 << u;
    }

    #[inline]
    pub(crate) fn clear_arc(&mut self, u: usize, v: usize) {
        self.out[u] &= !(1u64 << v);
        self.inn[v] &= !(1u64 << u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn arc_count(&self) -> usize {
        self.out[..self.n].iter().map(|r| r.count_ones() as usize).sum()
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.out[u] >> v) & 1 == 1
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| VertexSet(self.out[u]).iter().map(move |v| (u, v)))
    }

    pub fn out_rows(&self) -> &[u64] {
        &self.out[..self.n]
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    // Unchecked row access for hot loops.
    #[inline]
    pub(crate) fn out_row(&self, v: usize) -> VertexSet {
        VertexSet(self.out[v])
    }

    #[inline]
    pub(crate) fn in_row(&self, v: usize) -> VertexSet {
        VertexSet(self.inn[v])
    }

    pub fn out_neighbors(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.out_row(v))
    }

    pub fn in_neighbors(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.in_row(v))
    }

    pub fn closed_out_neighbors(&self, v: usize) -> Result<VertexSet> {
        Ok(self.out_neighbors(v)?.with(v))
    }

    pub fn closed_in_neighbors(&self, v: usize) -> Result<VertexSet> {
        Ok(self.in_neighbors(v)?.with(v))
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    /// `N⁻[S]`: `S` together with every vertex having an arc into `S`.
    #[inline]
    pub fn n_minus_closed(&self, s: VertexSet) -> VertexSet {
        let mut acc = s;
        for v in s.iter() {
            acc |= VertexSet(self.inn[v]);
        }
        acc
    }

    /// `N⁻(S)`: vertices at distance exactly one from `S`.
    #[inline]
    pub fn n_minus_set(&self, s: VertexSet) -> VertexSet {
        self.n_minus_closed(s) - s
    }

    /// `N⁺[S]`: `S` together with every vertex that `S` has an arc into.
    #[inline]
    pub fn n_plus_closed(&self, s: VertexSet) -> VertexSet {
        let mut acc = s;
        for v in s.iter() {
            acc |= VertexSet(self.out[v]);
        }
        acc
    }

    /// `N⁺(S)`: vertices at distance exactly one from `S` in the forward
    /// direction.
    #[inline]
    pub fn n_plus_set(&self, s: VertexSet) -> VertexSet {
        self.n_plus_closed(s) - s
    }

    /// `N⁻⁻[S]`: vertices at distance at most two from `S`.
    #[inline]
    pub fn n_minus_minus_closed(&self, s: VertexSet) -> VertexSet {
        self.n_minus_closed(self.n_minus_closed(s))
    }

    /// `N⁻⁻(S)`: vertices at distance exactly two from `S`.
    #[inline]
    pub fn n_minus_minus_set(&self, s: VertexSet) -> VertexSet {
        let one = self.n_minus_closed(s);
        self.n_minus_closed(one) - one
    }

    /// Breadth-first shortest directed path length from `u` to `v`.
    pub fn dist(&self, u: usize, v: usize) -> Result<Distance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.dist_to_set(u, VertexSet::singleton(v)))
    }

    /// `dist(u, S)`, the minimum over targets in `S`.
    pub fn dist_to_set(&self, u: usize, s: VertexSet) -> Distance {
        let mut seen = VertexSet::singleton(u);
        let mut frontier = seen;
        let mut d = 0;
        loop {
            if frontier.intersects(s) {
                return Distance::Finite(d);
            }
            let next = self.n_plus_closed(frontier) - seen;
            if next.is_empty() {
                return Distance::Infinite;
            }
            seen |= next;
            frontier = next;
            d += 1;
        }
    }

    /// Every vertex reachable from `v`, including `v`.
    pub fn reachable_from(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.n_plus_closed(frontier) - seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Every vertex that can reach `v`, including `v`.
    pub fn reaching(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.n_minus_closed(frontier) - seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// No arc joins two members of `s`.
    #[inline]
    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| !self.out_row(v).intersects(s))
    }

    /// `D[S]` has no directed cycle. Peels sinks of the induced subdigraph
    /// until nothing is left or nothing can be peeled.
    pub fn is_acyclic_set(&self, s: VertexSet) -> bool {
        let mut rest = s;
        loop {
            let sinks: VertexSet = rest
                .iter()
                .filter(|&v| !self.out_row(v).intersects(rest))
                .collect();
            if sinks.is_empty() {
                return rest.is_empty();
            }
            rest -= sinks;
        }
    }

    pub fn sinks(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.out[v] == 0).collect()
    }

    pub fn sources(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.inn[v] == 0).collect()
    }

    /// Every vertex has an out-neighbor. Vacuously true for the null digraph.
    pub fn is_sink_free(&self) -> bool {
        self.out[..self.n].iter().all(|&r| r != 0)
    }

    /// Vertices with in-degree zero and out-degree at least one.
    pub fn sources_not_sinks(&self) -> VertexSet {
        self.sources() - self.sinks()
    }

    /// Strongly connected components, each as a vertex set, ordered by their
    /// smallest member.
    pub fn strong_components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices();
        let mut comps = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.reachable_from(v) & self.reaching(v);
            comps.push(comp);
            left -= comp;
        }
        comps
    }

    /// True iff there is no directed cycle of odd length.
    ///
    /// Works per strong component: an odd closed walk exists in a strong
    /// component iff, starting from any root at parity 0, the root is also
    /// reachable at parity 1 in the vertex × parity product graph restricted
    /// to the component. An odd closed walk always contains an odd cycle.
    pub fn odd_dicycle_free(&self) -> bool {
        self.strong_components().into_iter().all(|comp| {
            if comp.len() < 2 {
                return true;
            }
            let root = comp.first().unwrap();
            let mut even = VertexSet::singleton(root);
            let mut odd = VertexSet::EMPTY;
            let mut frontier = (even, odd);
            while !(frontier.0.is_empty() && frontier.1.is_empty()) {
                let to_odd = self.n_plus_set_raw(frontier.0) & comp;
                let to_even = self.n_plus_set_raw(frontier.1) & comp;
                let new_odd = to_odd - odd;
                let new_even = to_even - even;
                odd |= new_odd;
                even |= new_even;
                frontier = (new_even, new_odd);
            }
            !odd.contains(root)
        })
    }

    // Union of out-neighborhoods, not excluding `s` itself.
    #[inline]
    fn n_plus_set_raw(&self, s: VertexSet) -> VertexSet {
        let mut acc = VertexSet::EMPTY;
        for v in s.iter() {
            acc |= VertexSet(self.out[v]);
        }
        acc
    }

    /// The subdigraph induced on `s`, relabelled in increasing vertex order.
    pub fn induced(&self, s: VertexSet) -> Induced {
        let embedding: Vec<usize> = (s & self.vertices()).to_vec();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in embedding.iter().enumerate() {
            index[v] = i;
        }
        let mut d = Digraph::null();
        d.n = embedding.len();
        for (i, &u) in embedding.iter().enumerate() {
            for v in (self.out_row(u) & s).iter() {
                d.set_arc(i, index[v]);
            }
        }
        Induced {
            digraph: d,
            embedding,
        }
    }

    /// Vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Digraph) -> Result<Digraph> {
        let n = self.n + other.n;
        let mut d = Digraph::edgeless(n)?;
        for (u, v) in self.arcs() {
            d.set_arc(u, v);
        }
        for (u, v) in other.arcs() {
            d.set_arc(self.n + u, self.n + v);
        }
        Ok(d)
    }

    pub fn reverse(&self) -> Digraph {
        let mut d = self.clone();
        std::mem::swap(&mut d.out, &mut d.inn);
        d
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Digraph {
        debug_assert_eq!(perm.len(), self.n);
        let mut d = Digraph::null();
        d.n = self.n;
        for (u, v) in self.arcs() {
            d.set_arc(perm[u], perm[v]);
        }
        d
    }

    /// Fixed-width hex of each out-row, concatenated. Identifies the labelled
    /// digraph given `n`.
    pub fn adjacency_hex(&self) -> String {
        let width = self.n.div_ceil(4).max(1);
        let mut s = String::with_capacity(width * self.n);
        for &row in self.out_rows() {
            s.push_str(&format!("{row:0width$x}"));
        }
        s
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs=[", self.n)?;
        for (i, (u, v)) in self.arcs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::TooManyVertices {
            requested: n,
            cap: MAX_VERTICES,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn ensure_cap(n: usize) -> Result<()> {
    check_cap(n)
}

/// An induced subdigraph together with the original label of each vertex.
#[derive(Debug, Clone)]
pub struct Induced {
    pub digraph: Digraph,
    /// `embedding[i]` is the original vertex that became vertex `i`.
    pub embedding: Vec<usize>,
}

impl Induced {
    /// Maps a set of the induced digraph back to original labels.
    pub fn lift(&self, s: VertexSet) -> VertexSet {
        s.iter().map(|i| self.embedding[i]).collect()
    }

    /// Maps a set of original vertices into the induced labelling, dropping
    /// vertices outside the induced set.
    pub fn restrict(&self, s: VertexSet) -> VertexSet {
        self.embedding
            .iter()
            .enumerate()
            .filter(|&(_, &v)| s.contains(v))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Which hereditary property each part of a [`Partition`] certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartKind {
    KernelPerfect,
    Acyclic,
    Independent,
}

/// Disjoint parts covering all vertices. Empty parts are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub kind: PartKind,
    pub parts: Vec<VertexSet>,
}

impl Partition {
    /// Validates disjointness and coverage against `d`. Does not check the
    /// per-part property.
    pub fn new(d: &Digraph, kind: PartKind, parts: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        for (i, &p) in parts.iter().enumerate() {
            if !p.is_subset(d.vertices()) {
                return Err(Error::InvalidPartition(format!(
                    "part {i} has vertices outside 0..{}",
                    d.n()
                )));
            }
            if seen.intersects(p) {
                return Err(Error::InvalidPartition(format!(
                    "part {i} overlaps an earlier part"
                )));
            }
            seen |= p;
        }
        if seen != d.vertices() {
            return Err(Error::InvalidPartition(format!(
                "vertices {} are not covered",
                d.vertices() - seen
            )));
        }
        Ok(Partition { kind, parts })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}
