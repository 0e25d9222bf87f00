//! Seeded random graph families for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Digraph, Graph};

/// Random graph of degeneracy at most `d`: vertex `i` joins `min(i, d)`
/// distinct earlier vertices chosen uniformly. Ids are shuffled afterwards.
pub fn degenerate_graph<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let picks = rand::seq::index::sample(rng, i, d.min(i));
        edges.extend(picks.into_iter().map(|j| (perm[i], perm[j])));
    }
    Graph::from_edges(n, &edges, false).expect("distinct picks give a simple graph")
}

/// Erdős–Rényi graph: every pair (ordered pair when directed) independently
/// with probability `p`.
pub fn gnp<R: Rng>(n: usize, p: f64, directed: bool, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges, directed).expect("simple by construction")
}

/// Random DAG: a uniformly random topological order, then every forward
/// pair with probability `p`.
pub fn random_dag<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((perm[i], perm[j]));
            }
        }
    }
    Digraph::from_arcs(n, &arcs).expect("simple by construction")
}

/// Preferential-attachment DAG: vertex `i` sends `min(i, out)` arcs to
/// distinct earlier vertices, picked with probability proportional to
/// in-degree plus one. Out-degrees are at most `out`; in-degrees are heavy
/// tailed.
pub fn preferential_dag<R: Rng>(n: usize, out: usize, rng: &mut R) -> Digraph {
    let mut urn: Vec<usize> = Vec::with_capacity(n * (out + 1));
    let mut arcs = Vec::with_capacity(n * out);
    let mut chosen = Vec::with_capacity(out);
    for i in 0..n {
        chosen.clear();
        while chosen.len() < out.min(i) {
            let t = urn[rng.gen_range(0..urn.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            arcs.push((i, t));
            urn.push(t);
        }
        urn.push(i);
    }
    Digraph::from_arcs(n, &arcs).expect("distinct picks")
}

/// Uniform random assignment of `n` vertices to `k` parts.
pub fn random_partition<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}
