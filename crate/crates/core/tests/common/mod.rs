//! Brute-force oracles written against the arc relation only, so they share
//! no code with the library's bit-parallel neighbourhood routines.

#![allow(dead_code)]

use qkernel::{Digraph, VertexSet};

pub fn set(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

pub fn members(n: usize, s: u64) -> Vec<usize> {
    (0..n).filter(|&v| s >> v & 1 == 1).collect()
}

pub fn arc_matrix(d: &Digraph) -> Vec<Vec<bool>> {
    let n = d.n();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in d.arcs() {
        m[u][v] = true;
    }
    m
}

/// Shortest-path distances by Floyd–Warshall; `usize::MAX` for unreachable.
pub fn distances(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.n();
    let a = arc_matrix(d);
    let mut dist = vec![vec![usize::MAX; n]; n];
    for u in 0..n {
        dist[u][u] = 0;
        for v in 0..n {
            if a[u][v] {
                dist[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] != usize::MAX && dist[k][j] != usize::MAX {
                    dist[i][j] = dist[i][j].min(dist[i][k] + dist[k][j]);
                }
            }
        }
    }
    dist
}

pub fn dist_to_set(dist: &[Vec<usize>], u: usize, s: u64) -> usize {
    (0..dist.len())
        .filter(|&v| s >> v & 1 == 1)
        .map(|v| dist[u][v])
        .min()
        .unwrap_or(usize::MAX)
}

pub fn independent(a: &[Vec<bool>], s: u64) -> bool {
    let n = a.len();
    (0..n).all(|u| (0..n).all(|v| !(s >> u & 1 == 1 && s >> v & 1 == 1 && a[u][v])))
}

pub fn is_qk(d: &Digraph, s: u64) -> bool {
    let a = arc_matrix(d);
    let dist = distances(d);
    independent(&a, s) && (0..d.n()).all(|u| dist_to_set(&dist, u, s) <= 2)
}

/// `{u : dist(u, S) = 1}`.
pub fn n_minus(d: &Digraph, s: u64) -> u64 {
    let dist = distances(d);
    (0..d.n())
        .filter(|&u| dist_to_set(&dist, u, s) == 1)
        .fold(0, |acc, u| acc | 1 << u)
}

/// `{u : dist(u, S) <= 1}`.
pub fn n_minus_closed(d: &Digraph, s: u64) -> u64 {
    let dist = distances(d);
    (0..d.n())
        .filter(|&u| dist_to_set(&dist, u, s) <= 1)
        .fold(0, |acc, u| acc | 1 << u)
}

/// `{v : dist(S, v) = 1}`.
pub fn n_plus(d: &Digraph, s: u64) -> u64 {
    let dist = distances(d);
    (0..d.n())
        .filter(|&v| {
            (0..d.n())
                .filter(|&u| s >> u & 1 == 1)
                .map(|u| dist[u][v])
                .min()
                == Some(1)
        })
        .fold(0, |acc, v| acc | 1 << v)
}

pub fn all_quasi_kernels(d: &Digraph) -> Vec<u64> {
    (0..1u64 << d.n()).filter(|&s| is_qk(d, s)).collect()
}

pub fn min_qk_size(d: &Digraph) -> usize {
    all_quasi_kernels(d)
        .into_iter()
        .map(|s| s.count_ones() as usize)
        .min()
        .expect("a quasi-kernel exists")
}

pub fn is_kernel_of(d: &Digraph, t: u64, k: u64) -> bool {
    let a = arc_matrix(d);
    k & !t == 0
        && independent(&a, k)
        && (0..d.n())
            .filter(|&u| t >> u & 1 == 1 && k >> u & 1 == 0)
            .all(|u| (0..d.n()).any(|v| k >> v & 1 == 1 && a[u][v]))
}

pub fn has_kernel_within(d: &Digraph, t: u64) -> bool {
    let mut k = t;
    loop {
        if is_kernel_of(d, t, k) {
            return true;
        }
        if k == 0 {
            return false;
        }
        k = (k - 1) & t;
    }
}

pub fn kernel_perfect(d: &Digraph, s: u64) -> bool {
    let mut t = s;
    loop {
        if !has_kernel_within(d, t) {
            return false;
        }
        if t == 0 {
            return true;
        }
        t = (t - 1) & s;
    }
}

/// Whether `D[S]` has a directed cycle, by repeatedly deleting vertices
/// without out-arcs inside the remaining set.
pub fn has_cycle_within(d: &Digraph, s: u64) -> bool {
    let a = arc_matrix(d);
    let mut left: Vec<usize> = members(d.n(), s);
    loop {
        let before = left.len();
        let snapshot = left.clone();
        left.retain(|&u| snapshot.iter().any(|&v| a[u][v]));
        if left.is_empty() {
            return false;
        }
        if left.len() == before {
            return true;
        }
    }
}

/// Every simple directed cycle length, by DFS from each smallest vertex.
pub fn cycle_lengths(d: &Digraph) -> Vec<usize> {
    let a = arc_matrix(d);
    let n = d.n();
    let mut out = Vec::new();
    fn dfs(a: &[Vec<bool>], start: usize, u: usize, len: usize, seen: &mut Vec<bool>, out: &mut Vec<usize>) {
        for v in 0..a.len() {
            if !a[u][v] {
                continue;
            }
            if v == start {
                out.push(len);
            } else if v > start && !seen[v] {
                seen[v] = true;
                dfs(a, start, v, len + 1, seen, out);
                seen[v] = false;
            }
        }
    }
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        dfs(&a, s, s, 1, &mut seen, &mut out);
    }
    out
}

/// Enumerates labeled digraphs on `n` vertices by an independent ordering:
/// bit `u * n + v` of the mask is arc `u -> v`, skipping masks with loops.
pub fn all_labeled(n: usize) -> Vec<Digraph> {
    let mut out = Vec::new();
    let loops: u64 = (0..n).map(|v| 1u64 << (v * n + v)).sum();
    for mask in 0..1u64 << (n * n) {
        if mask & loops != 0 {
            continue;
        }
        let arcs = (0..n * n).filter(|&b| mask >> b & 1 == 1).map(|b| (b / n, b % n));
        out.push(Digraph::from_arcs(n, arcs).unwrap());
    }
    out
}

pub fn cycle(n: usize) -> Digraph {
    Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}
