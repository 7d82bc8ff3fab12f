//! Quasi-kernels built from kernel-perfect sets and partitions.
//!
//! * [`quasi_kernel_covering`]: for a kernel-perfect `P`, a quasi-kernel `Q`
//!   with `P ⊆ N⁻[Q]` and `Q ∩ N⁻(P) = ∅`.
//! * [`small_qk_from_partition`]: a sink-free digraph with a partition into
//!   `k >= 2` kernel-perfect parts has a quasi-kernel of size `<= (k-1)n/k`.
//! * [`large_qk_from_partition`]: a quasi-kernel with `k·|N⁻[Q]| >= n`.
//! * [`small_qk_with_sources`]: a quasi-kernel of size `<= n - s/k`, `s` the
//!   number of non-sink sources.
//!
//! Every result is re-verified; a failed bound is reported as
//! [`Error::Postcondition`].

use serde::{Deserialize, Serialize};

use crate::alpha::RationalAlpha;
use crate::digraph::{Digraph, PartKind, Partition, VertexSet};
use crate::error::{Error, Result};
use crate::reductions::{qk_via_iii_oracle, source_weighted_blowup};
use crate::solvers::{is_kernel_perfect, is_quasi_kernel, kernel_within, SolveResult};

/// Grows `P` by every vertex that has no out-neighbour in the set built so
/// far. Each added vertex is a sink of the grown set, which keeps it
/// kernel-perfect; at the end every outside vertex points into the result.
pub fn extend_to_dominating_kp_set(d: &Digraph, p: VertexSet) -> Result<VertexSet> {
    if !p.is_subset(d.vertices()) || !is_kernel_perfect(d, p)? {
        return Err(Error::NotKernelPerfect);
    }
    Ok(extend_unchecked(d, p))
}

// One ascending pass suffices: the set only grows, so a vertex rejected
// once stays rejected.
fn extend_unchecked(d: &Digraph, p: VertexSet) -> VertexSet {
    let mut grown = p;
    for v in (d.vertices() - p).iter() {
        if !d.out_row(v).intersects(grown) {
            grown.insert(v);
        }
    }
    grown
}

/// A quasi-kernel `Q` with `P ⊆ N⁻[Q]` and `Q ∩ N⁻(P) = ∅`: the minimum
/// kernel of the dominating kernel-perfect extension of `P`.
pub fn quasi_kernel_covering(d: &Digraph, p: VertexSet) -> Result<VertexSet> {
    let grown = extend_to_dominating_kp_set(d, p)?;
    covering_from_extension(d, p, grown)
}

fn covering_from_extension(d: &Digraph, p: VertexSet, grown: VertexSet) -> Result<VertexSet> {
    let q = kernel_within(d, grown).ok_or_else(|| {
        Error::post(
            "quasi_kernel_covering",
            format!("extension {grown} of a kernel-perfect set has no kernel"),
        )
    })?;
    if !is_quasi_kernel(d, q) {
        return Err(Error::post(
            "quasi_kernel_covering",
            format!("{q} is not a quasi-kernel"),
        ));
    }
    if !p.is_subset(d.n_minus_closed(q)) || q.intersects(d.n_minus_set(p)) {
        return Err(Error::post(
            "quasi_kernel_covering",
            format!("{q} fails P ⊆ N⁻[Q] or Q ∩ N⁻(P) = ∅ for P = {p}"),
        ));
    }
    Ok(q)
}

fn kernel_perfect_parts(d: &Digraph, partition: &Partition) -> Result<Vec<VertexSet>> {
    let p = Partition::new(d, PartKind::KernelPerfect, partition.parts.clone())?;
    for &part in &p.parts {
        if !is_kernel_perfect(d, part)? {
            return Err(Error::NotKernelPerfect);
        }
    }
    let mut parts = p.parts;
    while parts.len() < 2 {
        parts.push(VertexSet::EMPTY);
    }
    Ok(parts)
}

/// Which case of the small construction produced the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Part `V'_i` (1-based, `i >= 2`) had many in-neighbours in `V'_0`.
    Part(usize),
    Otherwise,
}

/// Intermediate sets of [`small_qk_from_partition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpallTrace {
    /// Number of parts after padding.
    pub k: usize,
    /// Kernel of `D[V_1]` after `V_1` was extended.
    pub kernel: VertexSet,
    /// Minimal subset of the kernel with the same in-neighbourhood.
    pub core: VertexSet,
    /// `V'_0, V'_1, ..., V'_k`.
    pub vprime: Vec<VertexSet>,
    /// `V - V'_1`.
    pub w: VertexSet,
    pub branch: Branch,
    pub result: VertexSet,
}

/// Quasi-kernel of size at most `(k-1)n/k` for a sink-free digraph with a
/// partition into `k` kernel-perfect parts (padded to `k = 2`).
pub fn small_qk_from_partition(d: &Digraph, partition: &Partition) -> Result<KpallTrace> {
    if let Some(v) = d.sinks().first() {
        return Err(Error::NotSinkFree(v));
    }
    let mut parts = kernel_perfect_parts(d, partition)?;
    let k = parts.len();
    let n = d.n();

    // make V_1 maximal; the other parts lose what it absorbed
    let v1 = extend_unchecked(d, parts[0]);
    parts[0] = v1;
    for part in parts.iter_mut().skip(1) {
        *part -= v1;
    }

    let kernel = kernel_within(d, v1).ok_or_else(|| {
        Error::post("small_qk_from_partition", "kernel-perfect V_1 has no kernel")
    })?;
    let target = d.n_minus_set(kernel);
    let mut core = kernel;
    for v in kernel.iter().rev() {
        if d.n_minus_set(core.without(v)) == target {
            core.remove(v);
        }
    }

    let mut vprime = Vec::with_capacity(k + 1);
    vprime.push(kernel - core);
    vprime.push(target | core);
    for &part in &parts[1..] {
        vprime.push(part - target);
    }
    let w = d.vertices() - vprime[1];
    debug_assert_eq!(vprime.iter().fold(VertexSet::EMPTY, |a, &b| a | b), d.vertices());

    let chosen = (2..=k).find(|&i| {
        k * (d.n_minus_set(vprime[i]) & vprime[0]).len() >= w.len()
    });
    let (branch, result) = match chosen {
        Some(i) => {
            let sub = d.induced(w);
            let p_local = sub.restrict(vprime[i]);
            let q_local = quasi_kernel_covering(&sub.digraph, p_local)?;
            let q = sub.lift(q_local);
            (Branch::Part(i), q | (core - d.n_minus_set(q)))
        }
        None => {
            // members of V'_0 with an out-neighbour in W; V'_0 itself lies
            // inside W and is independent, so these point into V'_2..V'_k
            let pointing: VertexSet = vprime[0]
                .iter()
                .filter(|&v| d.out_row(v).intersects(w))
                .collect();
            (Branch::Otherwise, pointing | core)
        }
    };

    if !is_quasi_kernel(d, result) {
        return Err(Error::post(
            "small_qk_from_partition",
            format!("{result} is not a quasi-kernel ({branch:?})"),
        ));
    }
    if k * result.len() > (k - 1) * n {
        return Err(Error::post(
            "small_qk_from_partition",
            format!("|Q| = {} exceeds ({k}-1)·{n}/{k} ({branch:?})", result.len()),
        ));
    }
    Ok(KpallTrace {
        k,
        kernel,
        core,
        vprime,
        w,
        branch,
        result,
    })
}

/// Quasi-kernel with `k·|N⁻[Q]| >= n`, covering the largest part.
pub fn large_qk_from_partition(d: &Digraph, partition: &Partition) -> Result<SolveResult> {
    let parts = kernel_perfect_parts(d, partition)?;
    large_from_parts(d, &parts)
}

fn large_from_parts(d: &Digraph, parts: &[VertexSet]) -> Result<SolveResult> {
    let k = parts.len();
    // first among the largest parts
    let largest = parts
        .iter()
        .copied()
        .rev()
        .max_by_key(|p| p.len())
        .expect("at least two parts");
    let grown = extend_unchecked(d, largest);
    let q = covering_from_extension(d, largest, grown)?;
    let covered = d.n_minus_closed(q).len();
    if k * covered < d.n() {
        return Err(Error::post(
            "large_qk_from_partition",
            format!("{k}·|N⁻[Q]| = {} < n = {}", k * covered, d.n()),
        ));
    }
    Ok(SolveResult {
        witness: Some(q),
        objective: covered,
        verified: true,
    })
}

/// Quasi-kernel of size at most `n - s/k`, through the weighted-blowup
/// reduction with the large construction as the oracle on the blowup.
/// The blowup inherits the partition: each part becomes the union of its
/// vertices' blocks, which stays kernel-perfect since copies are twins.
pub fn small_qk_with_sources(d: &Digraph, partition: &Partition) -> Result<SolveResult> {
    let parts = kernel_perfect_parts(d, partition)?;
    let k = parts.len();
    let alpha = RationalAlpha::reciprocal(k as u64)?;
    let s = d.sources_not_sinks();
    // same multiplicity as the reduction picks for alpha = 1/k
    let c = k * (d.n() - s.len()) + 1;
    let sb = source_weighted_blowup(d, c)?;

    let mut oracle = |b: &Digraph| -> Result<VertexSet> {
        if *b != sb.blowup {
            return Err(Error::post("small_qk_with_sources", "unexpected blowup"));
        }
        let lifted: Vec<VertexSet> = parts
            .iter()
            .map(|&part| sb.map.lift(sb.rest.restrict(part)))
            .collect();
        Partition::new(b, PartKind::KernelPerfect, lifted.clone())?;
        large_from_parts(b, &lifted)?
            .witness
            .ok_or_else(|| Error::post("small_qk_with_sources", "oracle returned nothing"))
    };
    let r = qk_via_iii_oracle(d, alpha, &mut oracle)?;
    let q = r.witness.expect("witness");
    if k * q.len() + s.len() > k * d.n() {
        return Err(Error::post(
            "small_qk_with_sources",
            format!("|Q| = {} exceeds n - s/k = {} - {}/{k}", q.len(), d.n(), s.len()),
        ));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::kp_number;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn partition(d: &Digraph, parts: &[&[usize]]) -> Partition {
        Partition::new(d, PartKind::KernelPerfect, parts.iter().map(|p| set(p)).collect()).unwrap()
    }

    #[test]
    fn extension() {
        let c4 = cycle(4);
        assert_eq!(extend_to_dominating_kp_set(&c4, set(&[0, 2])).unwrap(), set(&[0, 2]));
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(extend_to_dominating_kp_set(&path, set(&[2])).unwrap(), set(&[0, 2]));
        let c3 = cycle(3);
        let grown = extend_to_dominating_kp_set(&c3, VertexSet::EMPTY).unwrap();
        assert_eq!(c3.n_minus_closed(grown), c3.vertices());
        assert_eq!(
            extend_to_dominating_kp_set(&c3, c3.vertices()),
            Err(Error::NotKernelPerfect)
        );
    }

    #[test]
    fn covering() {
        assert_eq!(quasi_kernel_covering(&cycle(4), set(&[0, 2])).unwrap(), set(&[0, 2]));
        let e = Digraph::edgeless(4).unwrap();
        assert_eq!(quasi_kernel_covering(&e, e.vertices()).unwrap(), e.vertices());
        let c3 = cycle(3);
        let p = set(&[0, 1]);
        let q = quasi_kernel_covering(&c3, p).unwrap();
        assert!(p.is_subset(c3.n_minus_closed(q)));
        assert!(!q.intersects(c3.n_minus_set(p)));
    }

    #[test]
    fn small_from_partition_examples() {
        let c4 = cycle(4);
        let t = small_qk_from_partition(&c4, &partition(&c4, &[&[0, 2], &[1, 3]])).unwrap();
        assert!(t.result.len() <= 2);
        assert_eq!(t.vprime.len(), 3);

        let c3 = cycle(3);
        let t = small_qk_from_partition(&c3, &partition(&c3, &[&[0, 1], &[2]])).unwrap();
        assert!(t.result.len() <= 1);

        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let p = partition(&arc, &[&[0, 1]]);
        assert_eq!(small_qk_from_partition(&arc, &p), Err(Error::NotSinkFree(1)));
        let bad = partition(&c3, &[&[0, 1, 2]]);
        assert_eq!(small_qk_from_partition(&c3, &bad), Err(Error::NotKernelPerfect));
    }

    #[test]
    fn small_from_partition_on_blown_triangle() {
        let (d, _) = crate::reductions::c3_blowup(&cycle(3)).unwrap();
        let (k, p) = kp_number(&d).unwrap();
        assert_eq!(k, 3);
        let t = small_qk_from_partition(&d, &p).unwrap();
        assert!(t.result.len() <= 6);
    }

    #[test]
    fn large_from_partition_examples() {
        let c4 = cycle(4);
        let r = large_qk_from_partition(&c4, &partition(&c4, &[&[0, 2], &[1, 3]])).unwrap();
        assert_eq!(r.objective, 4);
        let e = Digraph::edgeless(3).unwrap();
        let r = large_qk_from_partition(&e, &partition(&e, &[&[0, 1, 2]])).unwrap();
        assert_eq!(r.objective, 3);
        let c3 = cycle(3);
        let r = large_qk_from_partition(&c3, &partition(&c3, &[&[0, 1], &[2]])).unwrap();
        assert!(r.objective >= 2);
    }

    #[test]
    fn with_sources_examples() {
        // sources 0 and 1 point into the 2-cycle 2 <-> 3
        let d = Digraph::from_arcs(4, [(0, 2), (1, 3), (2, 3), (3, 2)]).unwrap();
        let (_, p) = kp_number(&d).unwrap();
        let r = small_qk_with_sources(&d, &p).unwrap();
        assert!(r.objective <= 3);
        assert!(is_quasi_kernel(&d, r.witness.unwrap()));

        let c4 = cycle(4);
        let r = small_qk_with_sources(&c4, &partition(&c4, &[&[0, 2], &[1, 3]])).unwrap();
        assert!(r.objective <= 4);

        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let r = small_qk_with_sources(&arc, &partition(&arc, &[&[0, 1]])).unwrap();
        assert_eq!(r.witness, Some(set(&[1])));
    }
}
