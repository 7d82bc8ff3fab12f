//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Set `QK_EXTENDED=1` to add the exhaustive five-vertex conjecture sweep.

mod common;

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;

use common::*;
use qkernel::enumerate::{Enumeration, Filter};
use qkernel::generators::{circulant_tournament, c3_power, random_digraph, random_sink_free, union_family, FamilySpec};
use qkernel::harness::{sweep, ConjectureSpec, Corpus, Keep, Variant};
use qkernel::reductions::{add_source_gadget, brute_force_ii_oracle, c3_blowup, project_blowup_qk, qk_via_ii_oracle};
use qkernel::solvers::{
    chromatic_number, dichromatic_number, find_kernel, heavy_independent_set, kp_number,
    max_sharp_quasi_kernel, min_quasi_kernel,
};
use qkernel::theorems::{large_qk_from_partition, quasi_kernel_covering, small_qk_from_partition, Branch};
use qkernel::{Digraph, RationalAlpha, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn labeled(n: usize, filter: Filter) -> Vec<Digraph> {
    let e = Enumeration::new(n, filter, false).unwrap();
    e.iter().map(|(_, d)| d).collect()
}

fn up_to(max_n: usize, filter: Filter) -> Vec<Digraph> {
    (0..=max_n).flat_map(|n| labeled(n, filter)).collect()
}

fn c1_sharp_cycles() -> Outcome {
    let cases = [
        ("C2", union_family(&[FamilySpec::Cycle { n: 2 }]).unwrap(), 1),
        ("C4", union_family(&[FamilySpec::Cycle { n: 4 }]).unwrap(), 2),
        (
            "C2+C4",
            union_family(&[FamilySpec::Cycle { n: 2 }, FamilySpec::Cycle { n: 4 }]).unwrap(),
            3,
        ),
    ];
    let start = Instant::now();
    for (name, d, want) in &cases {
        let got = min_quasi_kernel(d).objective;
        ensure(got == *want && 2 * got == d.n(), || format!("{name}: min |Q| = {got}"))?;
        ensure(min_qk_size(d) == *want, || format!("{name}: oracle disagrees"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(1), || "slower than 1 s".into())?;
    Ok("min |Q| = 1, 2, 3 = n/2".into())
}

fn sweep_counts(n: usize, variant: Variant, sink_free: bool) -> Result<(u64, usize), String> {
    let corpus = Corpus::Enumeration {
        n,
        sink_free,
        canonical: false,
    };
    let spec = ConjectureSpec::standard(variant, RationalAlpha::HALF);
    let r = sweep(&corpus, &spec, (0, 1), Keep::Failures).map_err(|e| e.to_string())?;
    Ok((r.aggregates.count, r.failures().len()))
}

fn c2_exhaustive_sweep() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (variant, sink_free) in [
        (Variant::Small, true),
        (Variant::Large, false),
        (Variant::Sharp, false),
    ] {
        let (count, failures) = sweep_counts(4, variant, sink_free)?;
        ensure(failures == 0, || format!("{variant}: {failures} failures"))?;
        counts.push(count);
    }
    ensure(counts == [2401, 4096, 4096], || format!("corpus sizes {counts:?}"))?;
    // recount the small variant with the oracle on an independent enumeration
    let bad = all_labeled(4)
        .into_iter()
        .filter(|d| d.is_sink_free() && 2 * min_qk_size(d) > d.n())
        .count();
    ensure(bad == 0, || format!("oracle found {bad} small-variant failures"))?;
    ensure(start.elapsed() < Duration::from_secs(60), || "slower than 1 min".into())?;
    let mut msg = "n=4: small on 2401 sink-free, large and sharp on 4096, 0 failures".to_string();
    if std::env::var("QK_EXTENDED").is_ok_and(|v| v == "1") {
        for (variant, sink_free) in [
            (Variant::Small, true),
            (Variant::Large, false),
            (Variant::Sharp, false),
        ] {
            let (count, failures) = sweep_counts(5, variant, sink_free)?;
            ensure(failures == 0, || format!("n=5 {variant}: {failures} failures"))?;
            msg += &format!("; n=5 {variant}: {count} digraphs, 0 failures");
        }
    }
    Ok(msg)
}

fn c3_partition_theorems() -> Outcome {
    let mut corpus = up_to(4, Filter::SinkFree);
    let exhaustive = corpus.len();
    let p = Ratio::new(1, 3);
    for i in 0..1000u64 {
        let n = 2 + (i % 9) as usize;
        corpus.push(random_sink_free(n, p, 2024, i).map_err(|e| e.to_string())?);
    }
    let results: Vec<Result<Branch, String>> = corpus
        .par_iter()
        .map(|d| {
            let (kp, part) = kp_number(d).map_err(|e| e.to_string())?;
            let k = kp.max(2);
            let t = small_qk_from_partition(d, &part).map_err(|e| format!("{d:?}: {e}"))?;
            let q = t.result.bits();
            ensure(is_qk(d, q), || format!("{d:?}: {} is not a quasi-kernel", t.result))?;
            ensure(k * t.result.len() <= (k - 1) * d.n(), || format!("{d:?}: small bound"))?;
            let r = large_qk_from_partition(d, &part).map_err(|e| format!("{d:?}: {e}"))?;
            let w = r.witness.unwrap().bits();
            ensure(is_qk(d, w), || format!("{d:?}: large result is not a quasi-kernel"))?;
            let covered = n_minus_closed(d, w).count_ones() as usize;
            ensure(k * covered >= d.n(), || format!("{d:?}: large bound"))?;
            Ok(t.branch)
        })
        .collect();
    let mut some_part = 0;
    let mut otherwise = 0;
    for r in results {
        match r? {
            Branch::Part(_) => some_part += 1,
            Branch::Otherwise => otherwise += 1,
        }
    }
    ensure(some_part > 0 && otherwise > 0, || {
        format!("branches: part {some_part}, otherwise {otherwise}")
    })?;
    Ok(format!(
        "{exhaustive} exhaustive + 1000 random; branches part={some_part} otherwise={otherwise}"
    ))
}

fn random_acyclic_subset(d: &Digraph, r: &mut ChaCha8Rng) -> u64 {
    let mut order: Vec<usize> = (0..d.n()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, r.gen_range(0..=i));
    }
    let mut p = 0u64;
    for v in order {
        if r.gen_bool(0.5) && !has_cycle_within(d, p | 1 << v) {
            p |= 1 << v;
        }
    }
    p
}

fn c4_covering_lemma() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(31);
    for i in 0..500u64 {
        let n = r.gen_range(1..=9);
        let d = random_digraph(n, Ratio::new(1, 3), 77, i).map_err(|e| e.to_string())?;
        let p = random_acyclic_subset(&d, &mut r);
        let q = quasi_kernel_covering(&d, VertexSet::from_bits(p))
            .map_err(|e| format!("{d:?} P={p:b}: {e}"))?
            .bits();
        ensure(is_qk(&d, q), || format!("{d:?}: not a quasi-kernel"))?;
        ensure(p & !n_minus_closed(&d, q) == 0, || format!("{d:?}: P not covered"))?;
        ensure(q & n_minus(&d, p) == 0, || format!("{d:?}: Q meets N⁻(P)"))?;
    }
    Ok("500 random (D, P), 0 violations".into())
}

// Greedy pick of a vertex with in >= out among what is left, without the
// fallback search; only used to count where the greedy set alone falls short.
fn greedy_heavy(a: &[Vec<bool>]) -> u64 {
    let n = a.len();
    let mut rest: u64 = (1u64 << n) - 1;
    let mut picked = 0u64;
    while rest != 0 {
        let deg = |v: usize, out: bool| {
            (0..n).filter(|&u| rest >> u & 1 == 1 && if out { a[v][u] } else { a[u][v] }).count()
        };
        let v = (0..n).find(|&v| rest >> v & 1 == 1 && deg(v, false) >= deg(v, true)).unwrap();
        picked |= 1 << v;
        for (u, row) in a.iter().enumerate() {
            if row[v] || a[v][u] || u == v {
                rest &= !(1u64 << u);
            }
        }
    }
    picked
}

fn c5_heavy_sets() -> Outcome {
    let start = Instant::now();
    let mut total = 0usize;
    let mut greedy_short = 0usize;
    for n in 0..=5 {
        let e = Enumeration::new(n, Filter::All, false).unwrap();
        let results: Vec<Result<bool, String>> = (0..e.total())
            .into_par_iter()
            .map(|i| {
                let d = e.get(i).unwrap();
                let check = || -> Result<bool, String> {
                    let set = heavy_independent_set(&d).map_err(|e| e.to_string())?.bits();
                    let a = arc_matrix(&d);
                    ensure(independent(&a, set), || "not independent".into())?;
                    let maximal = (0..n).all(|v| {
                        set >> v & 1 == 1 || (0..n).any(|u| set >> u & 1 == 1 && (a[u][v] || a[v][u]))
                    });
                    ensure(maximal, || "not maximal".into())?;
                    let (minus, plus) = (n_minus(&d, set).count_ones(), n_plus(&d, set).count_ones());
                    ensure(minus >= plus, || format!("|N⁻| = {minus} < |N⁺| = {plus}"))?;
                    ensure(set.count_ones() + 2 * minus >= n as u32, || "score below n".into())?;
                    let g = greedy_heavy(&a);
                    let (gm, gp) = (n_minus(&d, g), n_plus(&d, g));
                    ensure(g.count_ones() + 2 * gm.count_ones() >= n as u32, || "greedy score below n".into())?;
                    Ok(gm.count_ones() < gp.count_ones())
                };
                check().map_err(|m| format!("{d:?}: {m}"))
            })
            .collect();
        for r in results {
            greedy_short += usize::from(r?);
        }
        total += e.total() as usize;
    }
    ensure(start.elapsed() < Duration::from_secs(300), || "slower than 5 min".into())?;
    Ok(format!(
        "{total} digraphs, 0 violations; greedy alone has |N⁻| < |N⁺| on {greedy_short}, repaired by search"
    ))
}

fn c6_triangle_powers() -> Outcome {
    let (k1, p1) = kp_number(&c3_power(1).unwrap()).map_err(|e| e.to_string())?;
    let d2 = c3_power(2).unwrap();
    let (k2, p2) = kp_number(&d2).map_err(|e| e.to_string())?;
    ensure(k1 == 2 && k2 == 3, || format!("kp = {k1}, {k2}"))?;
    ensure(k2 == (3 * k1).div_ceil(2), || "recurrence fails".into())?;
    for part in &p2.parts {
        ensure(kernel_perfect(&d2, part.bits()), || format!("part {part} not kernel-perfect"))?;
    }
    ensure(p1.parts.len() == 2, || "bad certificate".into())?;
    // no 2-partition of C3^2 into kernel-perfect parts
    let full = (1u64 << 9) - 1;
    let two = (0..1u64 << 9).any(|s| kernel_perfect(&d2, s) && kernel_perfect(&d2, full & !s));
    ensure(!two, || "oracle found a 2-partition".into())?;
    Ok("kp(C3) = 2, kp(C3^2) = 3 = ceil(1.5·2)".into())
}

fn c7_blowup_identity() -> Outcome {
    let mut checked = 0usize;
    for n in 0..=3 {
        for d in all_labeled(n) {
            let (b, map) = c3_blowup(&d).map_err(|e| e.to_string())?;
            for qp in all_quasi_kernels(&b) {
                let q = project_blowup_qk(&d, &b, &map, VertexSet::from_bits(qp))
                    .map_err(|e| format!("{d:?}: {e}"))?
                    .bits();
                let want = (0..n).filter(|&v| (qp >> (3 * v)) & 0b111 != 0).fold(0, |a, v| a | 1 << v);
                ensure(q == want, || format!("{d:?}: projection differs"))?;
                let lhs = n_minus(&b, qp).count_ones();
                let rhs = q.count_ones() + 3 * n_minus(&d, q).count_ones();
                ensure(lhs == rhs, || format!("{d:?}, Q'={qp:b}: {lhs} != {rhs}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} quasi-kernels of blowups, identity exact"))
}

fn c8_gadget_inequality() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0usize;
    for _ in 0..200 {
        let n = r.gen_range(1..=4);
        let e = Enumeration::new(n, Filter::All, false).unwrap();
        let d = e.get(r.gen_range(0..e.total())).unwrap();
        for c in 1..=3 {
            let (g, _) = add_source_gadget(&d, c).map_err(|e| e.to_string())?;
            let a = arc_matrix(&g);
            let base = (1u64 << n) - 1;
            // independent sets of the gadget digraph, then the quasi-kernel test
            let mut stack = vec![(0usize, 0u64)];
            while let Some((v, s)) = stack.pop() {
                if v == g.n() {
                    if is_qk(&g, s) {
                        let covered = n_minus_closed(&d, s & base).count_ones() as usize;
                        let lhs = c * (n - covered);
                        ensure(lhs <= s.count_ones() as usize, || {
                            format!("{d:?}, C={c}, Q'={s:b}: {lhs} > |Q'|")
                        })?;
                        checked += 1;
                    }
                    continue;
                }
                stack.push((v + 1, s));
                if (0..v).all(|u| s >> u & 1 == 0 || !(a[u][v] || a[v][u])) {
                    stack.push((v + 1, s | 1 << v));
                }
            }
        }
    }
    Ok(format!("200 digraphs x C in 1..=3, {checked} quasi-kernels, 0 violations"))
}

fn c9_ii_to_i() -> Outcome {
    let mut total = 0usize;
    for n in 0..=5 {
        let e = Enumeration::new(n, Filter::SinkFree, false).unwrap();
        let bad: Vec<String> = (0..e.total())
            .into_par_iter()
            .filter_map(|i| {
                let d = e.get(i)?;
                let mut oracle = brute_force_ii_oracle;
                let res = qk_via_ii_oracle(&d, RationalAlpha::HALF, &mut oracle);
                let msg = match res {
                    Err(err) => Some(err.to_string()),
                    Ok(r) => {
                        let q = r.witness.unwrap();
                        if !r.verified || !d.is_independent(q) || !qkernel::solvers::is_quasi_kernel(&d, q) {
                            Some("not a quasi-kernel".into())
                        } else if 3 * q.len() > 2 * n {
                            Some(format!("|Q| = {}", q.len()))
                        } else {
                            None
                        }
                    }
                };
                msg.map(|m| format!("{d:?}: {m}"))
            })
            .collect();
        if let Some(m) = bad.first() {
            return Err(m.clone());
        }
        total += (0..e.total()).filter(|&i| e.get(i).is_some()).count();
    }
    Ok(format!("{total} sink-free digraphs, 3|Q| <= 2n throughout"))
}

fn c10_richardson() -> Outcome {
    let mut free = 0usize;
    for n in 0..=5 {
        let e = Enumeration::new(n, Filter::All, false).unwrap();
        let (count, bad) = (0..e.total())
            .into_par_iter()
            .map(|i| {
                let d = e.get(i).unwrap();
                if !d.odd_dicycle_free() {
                    return (0, 0);
                }
                let k = find_kernel(&d).witness;
                let ok = k.is_some_and(|k| is_kernel_of(&d, (1u64 << n) - 1, k.bits()));
                (1, usize::from(!ok))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        ensure(bad == 0, || format!("n={n}: {bad} odd-dicycle-free digraphs without kernel"))?;
        free += count;
    }
    // the parity test itself against explicit cycles
    for d in up_to(4, Filter::All) {
        let odd = cycle_lengths(&d).iter().any(|l| l % 2 == 1);
        ensure(d.odd_dicycle_free() == !odd, || format!("{d:?}: parity test disagrees"))?;
    }
    Ok(format!("{free} odd-dicycle-free digraphs on n <= 5, all have kernels"))
}

fn c11_circulants() -> Outcome {
    for n in [3, 5, 7] {
        let t = circulant_tournament(n).unwrap();
        let got = max_sharp_quasi_kernel(&t).objective;
        let oracle = all_quasi_kernels(&t)
            .into_iter()
            .map(|q| q.count_ones() + 2 * n_minus(&t, q).count_ones())
            .max()
            .unwrap() as usize;
        ensure(got == n && oracle == n, || format!("n={n}: objective {got}, oracle {oracle}"))?;
    }
    Ok("doubled sharp objective = n for n = 3, 5, 7".into())
}

fn c12_inequality_chain() -> Outcome {
    let corpus = up_to(4, Filter::All);
    for d in &corpus {
        let kp = kp_number(d).map_err(|e| e.to_string())?.0;
        let dchi = dichromatic_number(d).map_err(|e| e.to_string())?.0;
        let chi = chromatic_number(d).map_err(|e| e.to_string())?.0;
        ensure(kp <= dchi && dchi <= chi && kp <= chi.div_ceil(2), || {
            format!("{d:?}: kp={kp} dichromatic={dchi} chromatic={chi}")
        })?;
    }
    Ok(format!("{} digraphs, 0 violations", corpus.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("min quasi-kernels of C2, C4, C2+C4 equal n/2", c1_sharp_cycles),
        ("exhaustive conjecture sweep on 4 vertices", c2_exhaustive_sweep),
        ("small and large quasi-kernels from kernel-perfect partitions", c3_partition_theorems),
        ("quasi-kernel covering an acyclic set", c4_covering_lemma),
        ("heavy maximal independent sets on n <= 5", c5_heavy_sets),
        ("kernel-perfect number of iterated triangle blowups", c6_triangle_powers),
        ("triangle-blowup in-neighbourhood identity", c7_blowup_identity),
        ("source-gadget inequality", c8_gadget_inequality),
        ("with-sources to small reduction on n <= 5", c9_ii_to_i),
        ("odd-dicycle-free digraphs have kernels", c10_richardson),
        ("circulant tournaments attain the sharp bound", c11_circulants),
        ("kp <= dichromatic <= chromatic, kp <= ceil(chromatic/2)", c12_inequality_chain),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
