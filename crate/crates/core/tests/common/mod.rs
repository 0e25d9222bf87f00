#![allow(dead_code)]

use cyclehom::graph::{Digraph, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Max over vertex subsets of the minimum degree inside the subset.
pub fn brute_degeneracy(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut best = 0;
    for mask in 1u32..1 << n {
        let min = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| g.neighbors(v).iter().filter(|&&u| mask >> u & 1 == 1).count())
            .min()
            .unwrap_or(0);
        best = best.max(min);
    }
    best
}

/// Dense adjacency power: entry `[x][y]` of `A^len`.
pub fn matrix_power(d: &Digraph, len: usize) -> Vec<Vec<u128>> {
    let n = d.vertex_count();
    let mut cur: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u128).collect()).collect();
    for _ in 0..len {
        let mut next = vec![vec![0u128; n]; n];
        for (i, row) in cur.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c != 0 {
                    for &j in d.out_neighbors(k) {
                        next[i][j] += c;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Alternating orientation of `C_2p`: even vertices are sources.
pub fn alternating_cycle(p: usize) -> Digraph {
    let arcs: Vec<_> = (0..p).flat_map(|i| [(2 * i, 2 * i + 1), ((2 * i + 2) % (2 * p), 2 * i + 1)]).collect();
    Digraph::from_arcs(2 * p, &arcs).unwrap()
}

/// Simple directed 4-cycles through distinct vertices, each counted once
/// per starting vertex (so every cycle four times).
pub fn directed_four_cycles(g: &Graph) -> usize {
    let mut count = 0;
    for a in 0..g.vertex_count() {
        for &b in g.neighbors(a) {
            for &c in g.neighbors(b) {
                if c == a {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d != a && d != b && g.has_edge(d, a) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Random digraph on `n` vertices with loops allowed.
pub fn random_loopy_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, &arcs).unwrap()
}

/// Random digraph without isolated vertices: a random spanning structure
/// plus extra arcs, loops allowed.
pub fn random_pattern(n: usize, rng: &mut ChaCha8Rng) -> Digraph {
    let mut arcs = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        arcs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    if n == 1 {
        arcs.push((0, 0));
    }
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(0.15) && !arcs.contains(&(u, v)) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, &arcs).unwrap()
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
