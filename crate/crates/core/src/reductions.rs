//! Gadget and blowup constructions that move between the quasi-kernel
//! conjecture variants, and combinators that turn a solver for one variant
//! into a solver for another.
//!
//! Oracle contract violations and failed final bounds are returned as
//! [`Error::OracleViolation`] and [`Error::Postcondition`]; either would be
//! the footprint of a counterexample.

use serde::{Deserialize, Serialize};

use crate::alpha::RationalAlpha;
use crate::digraph::{ensure_cap, Digraph, Induced, VertexSet};
use crate::error::{Error, Result};
use crate::solvers::{
    is_quasi_kernel, max_large_quasi_kernel, min_quasi_kernel, minimalize_quasi_kernel,
    sharp_score_doubled, SolveResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BlowupKind {
    /// `multiplicity` pendant sources per base vertex.
    SourceGadget { multiplicity: usize },
    /// Independent copies per base vertex.
    Weighted,
    /// A directed triangle per base vertex.
    C3,
}

/// Which copies of the blown-up digraph stand for each base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupMap {
    #[serde(flatten)]
    pub kind: BlowupKind,
    pub base_n: usize,
    /// `blocks[v]` is `f(v)`. For source gadgets it holds `v` itself and the
    /// gadget vertices attached to it.
    pub blocks: Vec<VertexSet>,
}

impl BlowupMap {
    /// Base vertex owning blown-up vertex `x`.
    pub fn owner(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(x))
    }

    /// Union of the blocks of every vertex in `s`.
    pub fn lift(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.blocks[v])
    }

    /// Base vertices whose block meets `s`.
    pub fn touched(&self, s: VertexSet) -> VertexSet {
        (0..self.base_n)
            .filter(|&v| self.blocks[v].intersects(s))
            .collect()
    }
}

/// Which quantity a [`SolveResult`] reports for a quasi-kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `|Q|`
    Size,
    /// `|N⁻[Q]|`
    Large,
    /// `|Q| + 2|N⁻(Q)|`
    Sharp,
}

impl Objective {
    pub fn eval(self, d: &Digraph, q: VertexSet) -> usize {
        match self {
            Objective::Size => q.len(),
            Objective::Large => d.n_minus_closed(q).len(),
            Objective::Sharp => sharp_score_doubled(d, q),
        }
    }
}

/// Adds, for every vertex `v`, `c` new vertices each with a single arc into
/// `v`. New vertices for `v` are numbered `n + v*c .. n + (v+1)*c`.
pub fn add_source_gadget(d: &Digraph, c: usize) -> Result<(Digraph, BlowupMap)> {
    if c == 0 {
        return Err(Error::InvalidArgument("gadget multiplicity must be >= 1".into()));
    }
    let n = d.n();
    ensure_cap(n * (c + 1))?;
    let mut g = Digraph::edgeless(n * (c + 1))?;
    for (u, v) in d.arcs() {
        g.set_arc(u, v);
    }
    let mut blocks = Vec::with_capacity(n);
    for v in 0..n {
        let mut block = VertexSet::singleton(v);
        for j in 0..c {
            let x = n + v * c + j;
            g.set_arc(x, v);
            block.insert(x);
        }
        blocks.push(block);
    }
    Ok((
        g,
        BlowupMap {
            kind: BlowupKind::SourceGadget { multiplicity: c },
            base_n: n,
            blocks,
        },
    ))
}

fn blowup_with(
    d: &Digraph,
    sizes: &[usize],
    kind: BlowupKind,
    inner: impl Fn(&mut Digraph, &[usize]),
) -> Result<(Digraph, BlowupMap)> {
    let total: usize = sizes.iter().sum();
    ensure_cap(total)?;
    let mut g = Digraph::edgeless(total)?;
    let mut blocks = Vec::with_capacity(d.n());
    let mut next = 0;
    for &s in sizes {
        let ids: Vec<usize> = (next..next + s).collect();
        inner(&mut g, &ids);
        blocks.push(ids.iter().copied().collect::<VertexSet>());
        next += s;
    }
    for (u, v) in d.arcs() {
        for x in blocks[u].iter() {
            for y in blocks[v].iter() {
                g.set_arc(x, y);
            }
        }
    }
    Ok((
        g,
        BlowupMap {
            kind,
            base_n: d.n(),
            blocks,
        },
    ))
}

/// Replaces vertex `a` by `multiplicities[a]` independent copies; every base
/// arc becomes a complete bipartite set of arcs between the two blocks.
pub fn weighted_blowup(d: &Digraph, multiplicities: &[usize]) -> Result<(Digraph, BlowupMap)> {
    if multiplicities.len() != d.n() {
        return Err(Error::InvalidArgument(format!(
            "{} multiplicities for {} vertices",
            multiplicities.len(),
            d.n()
        )));
    }
    if multiplicities.contains(&0) {
        return Err(Error::InvalidArgument("multiplicities must be >= 1".into()));
    }
    let total: usize = multiplicities.iter().sum();
    ensure_cap(total)?;
    blowup_with(d, multiplicities, BlowupKind::Weighted, |_, _| {})
}

/// Replaces every vertex by a directed triangle `3v -> 3v+1 -> 3v+2 -> 3v`.
pub fn c3_blowup(d: &Digraph) -> Result<(Digraph, BlowupMap)> {
    ensure_cap(3 * d.n())?;
    blowup_with(d, &vec![3; d.n()], BlowupKind::C3, |g, ids| {
        g.set_arc(ids[0], ids[1]);
        g.set_arc(ids[1], ids[2]);
        g.set_arc(ids[2], ids[0]);
    })
}

/// Projects a quasi-kernel of a blown-up digraph back onto its base.
///
/// For weighted and triangle blowups this is the set of base vertices whose
/// block meets `q_blown`; a triangle block may then contain only one member.
/// For source gadgets it is `q_blown` restricted to the original vertices.
/// The result is re-checked as a quasi-kernel of `base`.
pub fn project_blowup_qk(
    base: &Digraph,
    blown: &Digraph,
    map: &BlowupMap,
    q_blown: VertexSet,
) -> Result<VertexSet> {
    if !is_quasi_kernel(blown, q_blown) {
        return Err(Error::NotQuasiKernel);
    }
    let q = match map.kind {
        BlowupKind::SourceGadget { .. } => q_blown & base.vertices(),
        BlowupKind::Weighted => map.touched(q_blown),
        BlowupKind::C3 => {
            let q = map.touched(q_blown);
            if let Some(v) = q.iter().find(|&v| (map.blocks[v] & q_blown).len() != 1) {
                return Err(Error::post(
                    "project_blowup_qk",
                    format!("triangle block of {v} holds more than one member"),
                ));
            }
            q
        }
    };
    if !is_quasi_kernel(base, q) {
        return Err(Error::post(
            "project_blowup_qk",
            format!("projection {q} is not a quasi-kernel of the base"),
        ));
    }
    Ok(q)
}

/// Adds every copy of each touched block. Copies in a weighted blowup are
/// independent twins, so this keeps a quasi-kernel a quasi-kernel and makes
/// each block lie entirely inside or entirely outside `N⁻[Q]`.
pub fn saturate_blocks(map: &BlowupMap, q_blown: VertexSet) -> VertexSet {
    map.lift(map.touched(q_blown))
}

/// Solves on arbitrary digraphs given a solver for sink-free ones: while a
/// sink `v` exists, keep `v` and recurse on `D - N⁻[v]`.
pub fn sink_peel<F>(d: &Digraph, objective: Objective, solver: &mut F) -> Result<SolveResult>
where
    F: FnMut(&Digraph) -> Result<VertexSet>,
{
    fn peel<F>(d: &Digraph, solver: &mut F) -> Result<VertexSet>
    where
        F: FnMut(&Digraph) -> Result<VertexSet>,
    {
        let Some(v) = d.sinks().first() else {
            let q = solver(d)?;
            if !is_quasi_kernel(d, q) {
                return Err(Error::OracleViolation(format!(
                    "{q} is not a quasi-kernel of the sink-free input"
                )));
            }
            return Ok(q);
        };
        let rest = d.vertices() - d.n_minus_closed(VertexSet::singleton(v));
        let sub = d.induced(rest);
        let q_sub = peel(&sub.digraph, solver)?;
        Ok(sub.lift(q_sub).with(v))
    }
    let q = peel(d, solver)?;
    if !is_quasi_kernel(d, q) {
        return Err(Error::post("sink_peel", format!("{q} is not a quasi-kernel")));
    }
    Ok(SolveResult {
        witness: Some(q),
        objective: objective.eval(d, q),
        verified: true,
    })
}

/// Decomposition of a sink-free digraph around a minimal quasi-kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingSplit {
    pub q: VertexSet,
    /// `N⁻(Q)`
    pub n: VertexSet,
    /// Everything at distance exactly two from `Q`.
    pub m: VertexSet,
    /// Members of `Q` covered by the matching.
    pub q1: VertexSet,
    pub q2: VertexSet,
    /// Matched arcs `(u, v)` with `u` in `N` and `v` in `Q1`.
    pub matching: Vec<(usize, usize)>,
}

impl MatchingSplit {
    pub fn r(&self) -> usize {
        self.q1.len()
    }
    pub fn s(&self) -> usize {
        self.q2.len()
    }
    pub fn p(&self) -> usize {
        self.n.len()
    }
    pub fn m_len(&self) -> usize {
        self.m.len()
    }
}

/// Greedy maximal directed matching from `N⁻(Q)` into `Q` (each vertex of
/// `N` in index order takes its smallest unmatched out-neighbour in `Q`).
/// Checks that `N` sends an arc into `Q1`, that `Q2` points only into `M`,
/// and that `Q2` are sources but not sinks of `D[Q2 ∪ M]`.
pub fn matching_split(d: &Digraph, q: VertexSet) -> Result<MatchingSplit> {
    if let Some(v) = d.sinks().first() {
        return Err(Error::NotSinkFree(v));
    }
    if !is_quasi_kernel(d, q) {
        return Err(Error::NotQuasiKernel);
    }
    if let Some(v) = q.iter().find(|&v| is_quasi_kernel(d, q.without(v))) {
        return Err(Error::InvalidArgument(format!(
            "quasi-kernel {q} is not minimal (vertex {v} is removable)"
        )));
    }
    let n_set = d.n_minus_set(q);
    let m = d.vertices() - q - n_set;
    let mut q1 = VertexSet::EMPTY;
    let mut matching = Vec::new();
    for u in n_set.iter() {
        if let Some(v) = (d.out_row(u) & (q - q1)).first() {
            q1.insert(v);
            matching.push((u, v));
        }
    }
    let q2 = q - q1;
    if let Some(u) = n_set.iter().find(|&u| !d.out_row(u).intersects(q1)) {
        return Err(Error::post(
            "matching_split",
            format!("vertex {u} of N has no out-neighbour in Q1"),
        ));
    }
    if let Some(v) = q2.iter().find(|&v| !d.out_row(v).is_subset(m)) {
        return Err(Error::post(
            "matching_split",
            format!("vertex {v} of Q2 has an out-neighbour outside M"),
        ));
    }
    let sub = d.induced(q2 | m);
    if sub.lift(sub.digraph.sources_not_sinks()) & q2 != q2 {
        return Err(Error::post(
            "matching_split",
            "Q2 is not a set of non-sink sources of D[Q2 ∪ M]",
        ));
    }
    Ok(MatchingSplit {
        q,
        n: n_set,
        m,
        q1,
        q2,
        matching,
    })
}

/// Brute-force optimum for the with-sources variant: a minimum quasi-kernel.
pub fn brute_force_ii_oracle(d: &Digraph) -> Result<VertexSet> {
    Ok(min_quasi_kernel(d).witness.expect("quasi-kernels exist"))
}

/// Small quasi-kernel of a sink-free digraph from an oracle for the
/// with-sources variant at `alpha`: returns a quasi-kernel of size at most
/// `n / (1 + alpha)`.
///
/// The starting minimal quasi-kernel is the maximum-`|N⁻[Q]|` quasi-kernel,
/// minimalised.
pub fn qk_via_ii_oracle<F>(d: &Digraph, alpha: RationalAlpha, oracle: &mut F) -> Result<SolveResult>
where
    F: FnMut(&Digraph) -> Result<VertexSet>,
{
    if let Some(v) = d.sinks().first() {
        return Err(Error::NotSinkFree(v));
    }
    let start = max_large_quasi_kernel(d).witness.expect("quasi-kernels exist");
    let q = minimalize_quasi_kernel(d, start)?;
    qk_via_ii_oracle_from(d, alpha, q, oracle)
}

/// As [`qk_via_ii_oracle`], starting from a given minimal quasi-kernel.
pub fn qk_via_ii_oracle_from<F>(
    d: &Digraph,
    alpha: RationalAlpha,
    q: VertexSet,
    oracle: &mut F,
) -> Result<SolveResult>
where
    F: FnMut(&Digraph) -> Result<VertexSet>,
{
    let (p, qd) = (alpha.p() as u128, alpha.q() as u128);
    let split = matching_split(d, q)?;
    let sub = d.induced(split.q2 | split.m);
    let q_sub = oracle(&sub.digraph)?;
    if !is_quasi_kernel(&sub.digraph, q_sub) {
        return Err(Error::OracleViolation(format!(
            "{q_sub} is not a quasi-kernel of D[Q2 ∪ M]"
        )));
    }
    let s_sub = sub.digraph.sources_not_sinks().len() as u128;
    if qd * q_sub.len() as u128 > qd * sub.digraph.n() as u128 - p * s_sub {
        return Err(Error::OracleViolation(format!(
            "|Q'| = {} exceeds {} - {alpha}*{s_sub}",
            q_sub.len(),
            sub.digraph.n()
        )));
    }
    let q_prime = sub.lift(q_sub);
    let candidate = q_prime | (split.q1 - d.n_minus_set(q_prime));
    if !is_quasi_kernel(d, candidate) {
        return Err(Error::post(
            "qk_via_ii_oracle",
            format!("combined set {candidate} is not a quasi-kernel"),
        ));
    }
    let best = if candidate.len() < q.len() { candidate } else { q };
    if (p + qd) * best.len() as u128 > qd * d.n() as u128 {
        return Err(Error::post(
            "qk_via_ii_oracle",
            format!(
                "best candidate has size {} > n/(1+{alpha}) with n = {}",
                best.len(),
                d.n()
            ),
        ));
    }
    Ok(SolveResult {
        witness: Some(best),
        objective: best.len(),
        verified: is_quasi_kernel(d, best),
    })
}

/// The weighted blowup used to pass from the large variant to the
/// with-sources variant.
#[derive(Debug, Clone)]
pub struct SourceBlowup {
    /// Input with every non-sink source reduced to its smallest out-arc.
    pub pruned: Digraph,
    /// Non-sink sources `S`.
    pub sources: VertexSet,
    /// `A = V - S`, embedded as `D[A]`.
    pub rest: Induced,
    pub multiplicity: usize,
    /// Block size `C·|N⁻(a) ∩ S| + 1` per vertex of `D[A]`.
    pub weights: Vec<usize>,
    pub blowup: Digraph,
    pub map: BlowupMap,
}

pub fn source_weighted_blowup(d: &Digraph, c: usize) -> Result<SourceBlowup> {
    if c == 0 {
        return Err(Error::InvalidArgument("multiplicity must be >= 1".into()));
    }
    let sources = d.sources_not_sinks();
    let mut pruned = d.clone();
    for s in sources.iter() {
        let keep = d.out_row(s).first().expect("non-sink");
        for v in d.out_row(s).without(keep).iter() {
            pruned.clear_arc(s, v);
        }
    }
    let rest = pruned.induced(d.vertices() - sources);
    let weights: Vec<usize> = rest
        .embedding
        .iter()
        .map(|&a| c * (pruned.in_row(a) & sources).len() + 1)
        .collect();
    let (blowup, map) = weighted_blowup(&rest.digraph, &weights)?;
    Ok(SourceBlowup {
        pruned,
        sources,
        rest,
        multiplicity: c,
        weights,
        blowup,
        map,
    })
}

/// Quasi-kernel of size at most `n - alpha·s` (`s` non-sink sources) from an
/// oracle for the large variant at `alpha`.
///
/// Uses gadget multiplicity `C = q·t + 1` for `alpha = p/q` and `t = |A|`,
/// which leaves a slack below `1/q` and therefore none after rounding.
pub fn qk_via_iii_oracle<F>(d: &Digraph, alpha: RationalAlpha, oracle: &mut F) -> Result<SolveResult>
where
    F: FnMut(&Digraph) -> Result<VertexSet>,
{
    let (p, qd) = (alpha.p() as u128, alpha.q() as u128);
    let t = d.n() - d.sources_not_sinks().len();
    let c = alpha.q() as usize * t + 1;
    let sb = source_weighted_blowup(d, c)?;
    let b = &sb.blowup;

    let q_b = oracle(b)?;
    if !is_quasi_kernel(b, q_b) {
        return Err(Error::OracleViolation(format!(
            "{q_b} is not a quasi-kernel of the blowup"
        )));
    }
    if qd * (b.n_minus_closed(q_b).len() as u128) < p * b.n() as u128 {
        return Err(Error::OracleViolation(format!(
            "|N⁻[Q_B]| = {} is below {alpha}·{}",
            b.n_minus_closed(q_b).len(),
            b.n()
        )));
    }
    let q_b = saturate_blocks(&sb.map, q_b);
    let covered = b.n_minus_closed(q_b);
    let base = &sb.rest.digraph;
    for block in &sb.map.blocks {
        if covered.intersects(*block) && !block.is_subset(covered) {
            return Err(Error::post(
                "qk_via_iii_oracle",
                "a block is split by N⁻[Q_B] after saturation",
            ));
        }
    }
    let q_a = project_blowup_qk(base, b, &sb.map, q_b)?;
    let uncovered = base.vertices() - base.n_minus_closed(q_a);
    if uncovered != base.vertices() - sb.map.touched(covered) {
        return Err(Error::post(
            "qk_via_iii_oracle",
            "uncovered blocks disagree with uncovered base vertices",
        ));
    }
    let mut q = sb.rest.lift(q_a);
    for a in sb.rest.lift(uncovered).iter() {
        q |= sb.pruned.in_row(a) & sb.sources;
    }
    // arcs dropped by pruning may join a kept source to another member;
    // such a source already reaches Q in one step and nothing depends on it
    let clash: VertexSet = (q & sb.sources)
        .iter()
        .filter(|&s| d.out_row(s).intersects(q))
        .collect();
    q -= clash;

    if !is_quasi_kernel(d, q) {
        return Err(Error::post(
            "qk_via_iii_oracle",
            format!("{q} is not a quasi-kernel"),
        ));
    }
    let s = sb.sources.len() as u128;
    if qd * q.len() as u128 > qd * d.n() as u128 - p * s {
        return Err(Error::post(
            "qk_via_iii_oracle",
            format!("|Q| = {} exceeds {} - {alpha}·{s}", q.len(), d.n()),
        ));
    }
    Ok(SolveResult {
        witness: Some(q),
        objective: q.len(),
        verified: true,
    })
}
