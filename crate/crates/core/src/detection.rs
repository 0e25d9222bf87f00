//! Cycle detection by color coding and transversal counting.
//!
//! Given a vertex partition into `p` parts, a transversal is a simple
//! `p`-cycle meeting every part once. Inclusion-exclusion over unions of
//! parts turns transversal counting into `2^p` cycle homomorphism counts,
//! which the degenerate-graph pipeline computes exactly.

use num_bigint::{BigInt, Sign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::general::hom_cycle_general;
use crate::generate::random_partition;
use crate::graph::Graph;
use crate::pipeline::{hom_cycle_degenerate, Engine};
use crate::ring::Natural;

/// A graph with every vertex assigned to one of `parts` parts.
#[derive(Clone, Debug)]
pub struct PartitionedGraph {
    pub graph: Graph,
    pub part: Vec<usize>,
    pub parts: usize,
}

impl PartitionedGraph {
    pub fn new(graph: Graph, part: Vec<usize>, parts: usize) -> Result<PartitionedGraph> {
        if part.len() != graph.vertex_count() {
            return Err(Error::InvalidParameter("every vertex needs a part".into()));
        }
        if parts < 3 {
            return Err(Error::InvalidParameter(format!("need at least 3 parts, got {parts}")));
        }
        if parts > 30 {
            return Err(Error::InvalidParameter(format!("at most 30 parts are supported, got {parts}")));
        }
        if let Some(&bad) = part.iter().find(|&&p| p >= parts) {
            return Err(Error::InvalidParameter(format!("part index {bad} out of range")));
        }
        Ok(PartitionedGraph { graph, part, parts })
    }

    pub fn members(&self, i: usize) -> Vec<usize> {
        (0..self.part.len()).filter(|&v| self.part[v] == i).collect()
    }
}

/// Transversal counts of a partitioned graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversals {
    /// Homomorphisms from `C_p` whose image meets every part.
    pub homs: Natural,
    /// Simple transversal cycles: `homs / 2p` undirected, `homs / p` directed.
    pub cycles: Natural,
}

/// `sum_{S} (-1)^(p - |S|) hom(C_p, G_S)` over all sets `S` of parts, where
/// `G_S` keeps the edges inside the union of `S`. `hom` must count closed
/// `p`-walks exactly.
pub fn transversal_count<F>(pg: &PartitionedGraph, hom: F) -> Result<Transversals>
where
    F: Fn(&Graph, usize) -> Result<Natural> + Sync,
{
    let p = pg.parts;
    let terms: Vec<BigInt> = (0..1u32 << p)
        .into_par_iter()
        .map(|s| -> Result<BigInt> {
            let keep: Vec<bool> = pg.part.iter().map(|&i| s >> i & 1 == 1).collect();
            let sub = pg.graph.restrict(&keep);
            let h = if sub.edge_count() == 0 { Natural::ZERO } else { hom(&sub, p)? };
            let v = BigInt::from_biguint(Sign::Plus, h.to_biguint());
            Ok(if (p - s.count_ones() as usize).is_multiple_of(2) { v } else { -v })
        })
        .collect::<Result<_>>()?;
    let m: BigInt = terms.into_iter().sum();
    let homs = match m.to_biguint() {
        Some(b) => Natural::from(b),
        None => return Err(Error::Inconsistent(format!("negative transversal count {m}"))),
    };
    let per_cycle = if pg.graph.is_directed() { p } else { 2 * p } as u64;
    let cycles = homs.div_exact(per_cycle).ok_or_else(|| {
        Error::Inconsistent(format!("transversal count {homs} not divisible by {per_cycle}"))
    })?;
    Ok(Transversals { homs, cycles })
}

/// [`transversal_count`] with the degenerate-graph pipeline as counter.
pub fn transversal_count_degenerate(pg: &PartitionedGraph, engine: Engine) -> Result<Transversals> {
    transversal_count(pg, |g, p| hom_cycle_degenerate(g, p, engine))
}

/// Undirected graph whose transversal cycles of length `p` correspond to the
/// directed `k`-cycles of the source that follow the coloring.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub gstar: PartitionedGraph,
    /// Kept arcs with the new vertices placed on them, in path order.
    pub subdivisions: Vec<((usize, usize), Vec<usize>)>,
}

/// Keeps arcs from color `i` to color `i + 1 (mod k)` and replaces each by
/// an undirected path of length 2 through a fresh vertex. Vertices of color
/// `i` form part `2i`; fresh vertices on arcs leaving color `i` form part
/// `2i + 1`.
pub fn build_detection_gadget(d: &Graph, k: usize, color: &[usize]) -> Result<GadgetInstance> {
    build_detection_gadget_for_length(d, k, color, 2 * k)
}

/// Gadget for cycle length `len >= 2k`: arcs from color 0 to color 1 become
/// paths of length `len + 2 - 2k`, each inner vertex in its own part, so the
/// gadget has `len` parts and a transversal cycle has length `len`.
pub fn build_detection_gadget_for_length(d: &Graph, k: usize, color: &[usize], len: usize) -> Result<GadgetInstance> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {k}")));
    }
    if !d.is_directed() {
        return Err(Error::Usage("the gadget is built from a directed graph".into()));
    }
    if len < 2 * k {
        return Err(Error::InvalidParameter(format!("gadget length {len} is below 2k = {}", 2 * k)));
    }
    if color.len() != d.vertex_count() || color.iter().any(|&c| c >= k) {
        return Err(Error::InvalidParameter("coloring must give every vertex a color below k".into()));
    }
    let long = len + 2 - 2 * k;
    // Part of color i, and of the first inner vertex on arcs leaving color i.
    let vertex_part = |c: usize| if c == 0 { 0 } else { long + 2 * (c - 1) };
    let arc_part = |c: usize| if c == 0 { 1 } else { long + 2 * (c - 1) + 1 };
    let mut part: Vec<usize> = color.iter().map(|&c| vertex_part(c)).collect();
    let mut edges = Vec::new();
    let mut subdivisions = Vec::new();
    for (u, v) in d.edges() {
        if color[v] != (color[u] + 1) % k {
            continue;
        }
        let inner = if color[u] == 0 { long - 1 } else { 1 };
        let first = arc_part(color[u]);
        let ids: Vec<usize> = (0..inner).map(|i| part.len() + i).collect();
        part.extend((0..inner).map(|i| first + i));
        let mut prev = u;
        for &z in &ids {
            edges.push((prev, z));
            prev = z;
        }
        edges.push((prev, v));
        subdivisions.push(((u, v), ids));
    }
    let total = part.len();
    let graph = Graph::from_edges(total, &edges, false)?;
    Ok(GadgetInstance { gstar: PartitionedGraph::new(graph, part, len)?, subdivisions })
}

/// Repetition count giving failure probability at most `delta` when each
/// repetition succeeds with probability at least `k^-k`.
pub fn default_reps(k: usize, delta: f64) -> usize {
    ((k as f64).powi(k as i32) * (1.0 / delta).ln()).ceil().max(1.0) as usize
}

/// Deterministic generator for repetition `rep` of a run seeded with `seed`.
pub(crate) fn repetition_rng(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

/// Colors `g` at random with `k` colors, keeps edges between consecutive
/// colors (arcs from color `i` to `i + 1` when directed), and strips
/// vertices that cannot lie on a cycle. Returns `None` when nothing remains.
pub(crate) fn layered_core(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> Option<(Graph, Vec<usize>)> {
    let color = random_partition(g.vertex_count(), k, rng);
    let layered = g.filter_edges(|u, v| {
        color[v] == (color[u] + 1) % k || (!g.is_directed() && color[u] == (color[v] + 1) % k)
    });
    let core = prune_to_core(&layered);
    (core.edge_count() > 0).then_some((core, color))
}

/// Repeatedly drops vertices with no in-arc or no out-arc (degree below 2
/// when undirected); no cycle passes through them.
pub fn prune_to_core(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_neighbors(v).len()).collect();
    let mut outdeg: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let dead = |v: usize, i: &[usize], o: &[usize]| {
        if g.is_directed() {
            i[v] == 0 || o[v] == 0
        } else {
            o[v] < 2
        }
    };
    let mut stack: Vec<usize> = (0..n).filter(|&v| dead(v, &indeg, &outdeg)).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                if g.is_directed() {
                    indeg[u] -= 1;
                } else {
                    outdeg[u] -= 1;
                }
                if dead(u, &indeg, &outdeg) {
                    stack.push(u);
                }
            }
        }
        if g.is_directed() {
            for &u in g.in_neighbors(v) {
                if alive[u] {
                    outdeg[u] -= 1;
                    if dead(u, &indeg, &outdeg) {
                        stack.push(u);
                    }
                }
            }
        }
    }
    g.restrict(&alive)
}

/// Options shared by the randomized detectors.
#[derive(Clone, Copy, Debug)]
pub struct DetectOptions {
    /// Number of repetitions; `None` derives it from `delta`.
    pub reps: Option<usize>,
    pub seed: u64,
    /// Target failure probability when `reps` is `None`.
    pub delta: f64,
    pub engine: Engine,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { reps: None, seed: 0, delta: 0.05, engine: Engine::Comb }
    }
}

impl DetectOptions {
    pub fn repetitions(&self, k: usize) -> usize {
        self.reps.unwrap_or_else(|| default_reps(k, self.delta))
    }
}

fn any_repetition<F>(reps: usize, seed: u64, f: F) -> Result<bool>
where
    F: Fn(&mut ChaCha8Rng) -> Result<bool> + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|rep| f(&mut repetition_rng(seed, rep)))
        .find_any(|r| !matches!(r, Ok(false)))
        .unwrap_or(Ok(false))
}

/// Whether the directed graph `d` has a simple directed `k`-cycle, through
/// gadgets counted by the degenerate-graph pipeline. Never a false positive.
pub fn detect_directed_cycle(d: &Graph, k: usize, opts: &DetectOptions) -> Result<bool> {
    if !d.is_directed() {
        return Err(Error::Usage("directed detection needs a directed graph".into()));
    }
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {k}")));
    }
    any_repetition(opts.repetitions(k), opts.seed, |rng| {
        let Some((core, color)) = layered_core(d, k, rng) else {
            return Ok(false);
        };
        let gadget = build_detection_gadget(&core, k, &color)?;
        Ok(!transversal_count_degenerate(&gadget.gstar, opts.engine)?.homs.is_zero())
    })
}

/// Whether `g` (directed or not) has a simple `k`-cycle. Each repetition
/// counts transversals of a random `k`-partition restricted to edges between
/// consecutive parts. Lengths from 6 up use the degenerate-graph pipeline;
/// shorter ones use the general-graph counter.
pub fn detect_cycle_degenerate(g: &Graph, k: usize, opts: &DetectOptions) -> Result<bool> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {k}")));
    }
    any_repetition(opts.repetitions(k), opts.seed, |rng| {
        let Some((core, color)) = layered_core(g, k, rng) else {
            return Ok(false);
        };
        let pg = PartitionedGraph::new(core, color, k)?;
        let t = if k >= 6 {
            transversal_count_degenerate(&pg, opts.engine)?
        } else {
            transversal_count(&pg, hom_cycle_general)?
        };
        Ok(!t.homs.is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degeneracy_ordering, named};

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn transversal_examples() {
        let c4 = PartitionedGraph::new(named::cycle(4), vec![0, 1, 2, 3], 4).unwrap();
        let t = transversal_count_degenerate(&c4, Engine::Comb).unwrap();
        assert_eq!((t.homs, t.cycles), (n(8), n(1)));
        let k3 = PartitionedGraph::new(named::complete(3), vec![0, 1, 2], 3).unwrap();
        let t = transversal_count_degenerate(&k3, Engine::Comb).unwrap();
        assert_eq!((t.homs, t.cycles), (n(6), n(1)));
        let empty = PartitionedGraph::new(Graph::empty(4, false), vec![0, 1, 2, 3], 4).unwrap();
        assert_eq!(transversal_count_degenerate(&empty, Engine::Comb).unwrap().homs, n(0));
    }

    #[test]
    fn triangle_gadget_shape() {
        let d = named::directed_cycle(3);
        let gad = build_detection_gadget(&d, 3, &[0, 1, 2]).unwrap();
        let g = &gad.gstar.graph;
        assert_eq!((g.vertex_count(), g.edge_count(), gad.gstar.parts), (6, 6, 6));
        assert!(degeneracy_ordering(g).unwrap().degeneracy <= 2);
        let t = transversal_count_degenerate(&gad.gstar, Engine::Comb).unwrap();
        assert_eq!(t.homs, n(12));
    }

    #[test]
    fn odd_gadget_has_requested_length() {
        let d = named::directed_cycle(3);
        let gad = build_detection_gadget_for_length(&d, 3, &[0, 1, 2], 7).unwrap();
        assert_eq!(gad.gstar.parts, 7);
        assert_eq!(gad.gstar.graph.edge_count(), 7);
        let t = transversal_count_degenerate(&gad.gstar, Engine::Comb).unwrap();
        assert_eq!((t.homs, t.cycles), (n(14), n(1)));
    }

    #[test]
    fn dag_gadget_counts_nothing() {
        let d = crate::graph::Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)], true).unwrap();
        let gad = build_detection_gadget(&d, 3, &[0, 1, 2, 0]).unwrap();
        assert_eq!(transversal_count_degenerate(&gad.gstar, Engine::Comb).unwrap().homs, n(0));
    }

    #[test]
    fn detectors_on_small_cases() {
        let opts = DetectOptions { seed: 11, ..DetectOptions::default() };
        assert!(detect_directed_cycle(&named::directed_cycle(3), 3, &opts).unwrap());
        assert!(!detect_directed_cycle(&named::directed_cycle(4), 3, &opts).unwrap());
        assert!(detect_cycle_degenerate(&named::cycle(6), 6, &opts).unwrap());
        assert!(!detect_cycle_degenerate(&named::star(7), 6, &opts).unwrap());
        assert!(!detect_cycle_degenerate(&named::cycle(7), 6, &DetectOptions { reps: Some(300), ..opts }).unwrap());
        assert!(detect_cycle_degenerate(&named::cycle(4), 4, &opts).unwrap());
    }

    #[test]
    fn default_reps_formula() {
        assert_eq!(default_reps(3, 0.05), (27.0f64 * 20f64.ln()).ceil() as usize);
    }
}
