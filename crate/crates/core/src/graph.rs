//! Graphs, digraphs, the edge-list format, degeneracy orderings and acyclic
//! orientations.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

/// A simple graph with dense vertex ids `0..n`.
///
/// Undirected graphs store every edge in both endpoint lists. Directed graphs
/// keep separate out- and in-lists and may contain antiparallel arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    adj: Vec<Vec<usize>>,
    radj: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Vec<String>,
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Graph {
        Graph {
            directed,
            adj: vec![Vec::new(); n],
            radj: if directed { vec![Vec::new(); n] } else { Vec::new() },
            edge_count: 0,
            labels: (0..n).map(|v| v.to_string()).collect(),
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], directed: bool) -> Result<Graph> {
        let mut g = Graph::empty(n, directed);
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            let at = |message: String| Error::Parse { line: i + 1, message };
            if u >= n || v >= n {
                return Err(at(format!("vertex out of range in edge ({u}, {v})")));
            }
            if u == v {
                return Err(at(format!("self-loop at vertex {u}")));
            }
            let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert(key) {
                return Err(at(format!("duplicate edge ({u}, {v})")));
            }
            g.push_edge(u, v);
        }
        g.sort_lists();
        Ok(g)
    }

    fn push_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        if self.directed {
            self.radj[v].push(u);
        } else {
            self.adj[v].push(u);
        }
        self.edge_count += 1;
    }

    fn sort_lists(&mut self) {
        self.adj.iter_mut().for_each(|l| l.sort_unstable());
        self.radj.iter_mut().for_each(|l| l.sort_unstable());
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Neighbors of `v`; out-neighbors for a directed graph.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// In-neighbors of `v`; equal to [`Graph::neighbors`] when undirected.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.radj[v]
        } else {
            &self.adj[v]
        }
    }

    /// Number of incident edges (in plus out for directed graphs).
    pub fn degree(&self, v: usize) -> usize {
        if self.directed {
            self.adj[v].len() + self.radj[v].len()
        } else {
            self.adj[v].len()
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs sorted lexicographically; undirected edges
    /// are reported once with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Original token of each dense id.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Same vertex set, keeping only edges with both endpoints in `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Graph {
        let edges: Vec<_> =
            self.edges().into_iter().filter(|&(u, v)| keep[u] && keep[v]).collect();
        let mut g = Graph::from_edges(self.vertex_count(), &edges, self.directed)
            .expect("subgraph of a simple graph is simple");
        g.labels = self.labels.clone();
        g
    }

    /// Same vertex set, keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let edges: Vec<_> = self.edges().into_iter().filter(|&(u, v)| keep(u, v)).collect();
        let mut g = Graph::from_edges(self.vertex_count(), &edges, self.directed)
            .expect("subgraph of a simple graph is simple");
        g.labels = self.labels.clone();
        g
    }

    /// The undirected graph on the same vertices; antiparallel arcs merge.
    pub fn underlying_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut g = Graph::from_edges(self.vertex_count(), &edges, false).expect("deduplicated");
        g.labels = self.labels.clone();
        g
    }

    /// Views a directed graph as a [`Digraph`].
    pub fn to_digraph(&self) -> Result<Digraph> {
        if !self.directed {
            return Err(Error::Usage("expected a directed graph".into()));
        }
        Digraph::from_arcs(self.vertex_count(), &self.edges())
    }

    /// Writes the edge-list format: one line per vertex id, then one line per
    /// edge sorted by `(u, v)`. Parsing the output reproduces the same ids.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "{v}");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

/// Parses the whitespace-separated edge-list format.
///
/// Each non-blank line is either `u v` (an edge) or a single token (a vertex
/// declaration, which fixes its id and allows isolated vertices). Lines whose
/// first non-blank character is `#` are comments. Tokens are arbitrary
/// strings, densified to `0..n` in order of first appearance.
pub fn parse_graph(text: &str, directed: bool) -> Result<Graph> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                intern(v, &mut ids, &mut labels);
            }
            [u, v] => {
                let a = intern(u, &mut ids, &mut labels);
                let b = intern(v, &mut ids, &mut labels);
                edges.push((a, b));
                lines.push(i + 1);
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v`, found {} tokens", tokens.len()),
                })
            }
        }
    }
    let n = labels.len();
    let mut g = Graph::from_edges(n, &edges, directed).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse { line: lines[line - 1], message },
        other => other,
    })?;
    g.labels = labels;
    Ok(g)
}

fn intern<'a>(t: &'a str, ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>) -> usize {
    *ids.entry(t).or_insert_with(|| {
        labels.push(t.to_string());
        labels.len() - 1
    })
}

/// Reads and parses an edge list from any byte stream.
pub fn read_graph<R: Read>(mut reader: R, directed: bool) -> Result<Graph> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
    parse_graph(&text, directed)
}

/// Directed graph with in-degree and out-degree bookkeeping.
///
/// Parallel arcs are rejected. Self-loops are accepted here (tensor products
/// and blowups produce them) but make the digraph cyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arc_count: usize,
    max_out_degree: usize,
    topo: Option<Vec<usize>>,
}

impl Digraph {
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("arc ({u}, {v}) out of range for {n} vertices")));
            }
            out[u].push(v);
            inn[v].push(u);
        }
        for (u, l) in out.iter_mut().enumerate() {
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("parallel arcs leaving vertex {u}")));
            }
        }
        inn.iter_mut().for_each(|l| l.sort_unstable());
        let max_out_degree = out.iter().map(Vec::len).max().unwrap_or(0);
        let topo = kahn(&out, &inn);
        Ok(Digraph { out, inn, arc_count: arcs.len(), max_out_degree, topo })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn max_out_degree(&self) -> usize {
        self.max_out_degree
    }

    pub fn is_dag(&self) -> bool {
        self.topo.is_some()
    }

    pub fn topological_order(&self) -> Option<&[usize]> {
        self.topo.as_deref()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut a = Vec::with_capacity(self.arc_count);
        for (u, l) in self.out.iter().enumerate() {
            a.extend(l.iter().map(|&v| (u, v)));
        }
        a
    }

    /// Every arc reversed.
    pub fn reversed(&self) -> Digraph {
        let arcs: Vec<_> = self.arcs().into_iter().map(|(u, v)| (v, u)).collect();
        Digraph::from_arcs(self.vertex_count(), &arcs).expect("reversal keeps arcs simple")
    }

    /// The digraph as a directed [`Graph`]; fails on self-loops.
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.vertex_count(), &self.arcs(), true)
    }
}

fn kahn(out: &[Vec<usize>], inn: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg: Vec<usize> = inn.iter().map(Vec::len).collect();
    let mut order: Vec<usize> = (0..out.len()).filter(|&v| indeg[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                order.push(v);
            }
        }
    }
    (order.len() == out.len()).then_some(order)
}

/// A vertex ordering in which every vertex has at most `degeneracy`
/// neighbors placed after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    pub order: Vec<usize>,
    pub degeneracy: usize,
}

impl DegeneracyOrdering {
    /// Position of each vertex in `order`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// Repeatedly removes a vertex of minimum remaining degree, breaking ties by
/// smallest id.
pub fn degeneracy_ordering(g: &Graph) -> Result<DegeneracyOrdering> {
    let ids: Vec<usize> = (0..g.vertex_count()).collect();
    degeneracy_ordering_by_rank(g, &ids)
}

/// Like [`degeneracy_ordering`], but ties go to the vertex with the smallest
/// `rank[v]`. Different rankings give different valid orderings.
pub fn degeneracy_ordering_by_rank(g: &Graph, rank: &[usize]) -> Result<DegeneracyOrdering> {
    if g.is_directed() {
        return Err(Error::Usage("degeneracy ordering needs an undirected graph".into()));
    }
    let n = g.vertex_count();
    if rank.len() != n {
        return Err(Error::InvalidParameter("rank length differs from vertex count".into()));
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].insert((rank[v], v));
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let (_, v) = buckets[low].pop_first().expect("nonempty bucket");
        degeneracy = degeneracy.max(low);
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                buckets[deg[u]].remove(&(rank[u], u));
                deg[u] -= 1;
                buckets[deg[u]].insert((rank[u], u));
            }
        }
        low = low.saturating_sub(1);
    }
    Ok(DegeneracyOrdering { order, degeneracy })
}

fn check_ordering(n: usize, ord: &DegeneracyOrdering) -> Result<Vec<usize>> {
    if ord.order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "ordering has {} vertices, graph has {n}",
            ord.order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in ord.order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidParameter("ordering is not a permutation".into()));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// Orients every edge from the earlier to the later endpoint in `ord`.
pub fn orient_acyclic(g: &Graph, ord: &DegeneracyOrdering) -> Result<Digraph> {
    if g.is_directed() {
        return Err(Error::Usage("orientation needs an undirected graph".into()));
    }
    let pos = check_ordering(g.vertex_count(), ord)?;
    let arcs: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v)| if pos[u] < pos[v] { (u, v) } else { (v, u) })
        .collect();
    Digraph::from_arcs(g.vertex_count(), &arcs)
}

/// Splits a directed graph along an ordering: arcs that go forward in `ord`
/// form the first DAG; arcs that go backward, reversed, form the second.
pub fn split_by_ordering(g: &Graph, ord: &DegeneracyOrdering) -> Result<(Digraph, Digraph)> {
    if !g.is_directed() {
        return Err(Error::Usage("splitting needs a directed graph".into()));
    }
    let pos = check_ordering(g.vertex_count(), ord)?;
    let (mut fwd, mut bwd) = (Vec::new(), Vec::new());
    for (u, v) in g.edges() {
        if pos[u] < pos[v] {
            fwd.push((u, v));
        } else {
            bwd.push((v, u));
        }
    }
    let n = g.vertex_count();
    Ok((Digraph::from_arcs(n, &fwd)?, Digraph::from_arcs(n, &bwd)?))
}

/// Anything that can list its arcs; undirected graphs list both directions.
pub trait ArcSource {
    fn vertex_count(&self) -> usize;
    fn arc_list(&self) -> Vec<(usize, usize)>;
}

impl ArcSource for Graph {
    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    fn arc_list(&self) -> Vec<(usize, usize)> {
        let mut a = Vec::new();
        for (u, l) in self.adj.iter().enumerate() {
            a.extend(l.iter().map(|&v| (u, v)));
        }
        a
    }
}

impl ArcSource for Digraph {
    fn vertex_count(&self) -> usize {
        Digraph::vertex_count(self)
    }

    fn arc_list(&self) -> Vec<(usize, usize)> {
        self.arcs()
    }
}

/// Common small graphs.
pub mod named {
    use super::{Digraph, Graph};

    pub fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e, false).expect("cycle of length at least 3")
    }

    pub fn directed_cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e, true).expect("cycle of length at least 2")
    }

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e, false).expect("simple")
    }

    pub fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e, false).expect("simple")
    }

    pub fn star(leaves: usize) -> Graph {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &e, false).expect("simple")
    }

    /// Digraph with arcs `i -> i+1`.
    pub fn directed_path(n: usize) -> Digraph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Digraph::from_arcs(n, &e).expect("simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_counts_vertices_and_edges() {
        let g = parse_graph("0 1\n1 2", false).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn parse_rejects_duplicates_with_line() {
        let err = parse_graph("0 1\n0 1", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_graph("# c\n0 1\n\n1 0", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        assert!(parse_graph("0 1\n1 0", true).is_ok());
    }

    #[test]
    fn parse_rejects_self_loops_and_junk() {
        assert!(matches!(parse_graph("a a", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("0 1\n1 2 3", false), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn parse_densifies_in_first_appearance_order() {
        let g = parse_graph("a b\nb c", false).unwrap();
        assert_eq!(g.labels(), ["a", "b", "c"]);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn writer_round_trips_ids() {
        let g = Graph::from_edges(5, &[(0, 2), (1, 2), (3, 0)], false).unwrap();
        let h = parse_graph(&g.to_edge_list(), false).unwrap();
        assert_eq!(h.vertex_count(), 5);
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn degeneracy_of_named_graphs() {
        let tree = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)], false).unwrap();
        assert_eq!(degeneracy_ordering(&tree).unwrap().degeneracy, 1);
        assert_eq!(degeneracy_ordering(&named::complete(4)).unwrap().degeneracy, 3);
        assert_eq!(degeneracy_ordering(&named::cycle(6)).unwrap().degeneracy, 2);
        assert!(degeneracy_ordering(&named::directed_cycle(3)).is_err());
    }

    #[test]
    fn triangle_orientation_follows_order() {
        let g = named::complete(3);
        let ord = DegeneracyOrdering { order: vec![0, 1, 2], degeneracy: 2 };
        let d = orient_acyclic(&g, &ord).unwrap();
        assert_eq!(d.arcs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(d.max_out_degree(), 2);
        assert!(d.is_dag());
    }

    #[test]
    fn star_with_center_last_points_inward() {
        let g = named::star(4);
        let ord = DegeneracyOrdering { order: vec![1, 2, 3, 4, 0], degeneracy: 1 };
        let d = orient_acyclic(&g, &ord).unwrap();
        assert!((1..=4).all(|v| d.out_neighbors(v) == [0]));
        assert_eq!(d.max_out_degree(), 1);
    }

    #[test]
    fn edgeless_orientation_and_length_mismatch() {
        let g = Graph::empty(3, false);
        let ord = degeneracy_ordering(&g).unwrap();
        let d = orient_acyclic(&g, &ord).unwrap();
        assert_eq!(d.arc_count(), 0);
        assert!(d.is_dag());
        let short = DegeneracyOrdering { order: vec![0, 1], degeneracy: 0 };
        assert!(matches!(orient_acyclic(&g, &short), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn digraph_tracks_cycles_and_loops() {
        assert!(!named::directed_cycle(3).to_digraph().unwrap().is_dag());
        let looped = Digraph::from_arcs(2, &[(0, 0), (0, 1)]).unwrap();
        assert!(!looped.is_dag());
        assert!(looped.to_graph().is_err());
        assert!(Digraph::from_arcs(2, &[(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn split_separates_forward_and_backward_arcs() {
        let g = named::directed_cycle(3);
        let ord = DegeneracyOrdering { order: vec![0, 1, 2], degeneracy: 2 };
        let (f, b) = split_by_ordering(&g, &ord).unwrap();
        assert_eq!(f.arcs(), vec![(0, 1), (1, 2)]);
        assert_eq!(b.arcs(), vec![(0, 2)]);
    }
}
