//! Walk counts in bounded-out-degree DAGs and the weighted digraph built
//! from them.

use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::ring::{Natural, RingWeight, TruncPoly};

/// Number of directed walks of each length `1..=horizon` between every pair
/// of vertices of a DAG. Pairs with no walk are not stored.
#[derive(Clone, Debug)]
pub struct WalkCounts {
    horizon: usize,
    rows: Vec<Vec<(usize, Vec<Natural>)>>,
}

impl WalkCounts {
    /// Forward expansion from every vertex, one length at a time.
    pub fn compute(d: &Digraph, horizon: usize) -> Result<WalkCounts> {
        if horizon < 1 {
            return Err(Error::InvalidParameter("walk horizon must be at least 1".into()));
        }
        if !d.is_dag() {
            return Err(Error::NotAcyclic);
        }
        let rows = (0..d.vertex_count())
            .into_par_iter()
            .map(|x| walks_from(d, x, horizon))
            .collect();
        Ok(WalkCounts { horizon, rows })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    /// Targets reachable from `x`, sorted, with counts indexed by length - 1.
    pub fn row(&self, x: usize) -> &[(usize, Vec<Natural>)] {
        &self.rows[x]
    }

    /// Walks of exactly `len` arcs from `x` to `y`.
    pub fn count(&self, x: usize, y: usize, len: usize) -> Natural {
        if len == 0 || len > self.horizon {
            return Natural::ZERO;
        }
        match self.rows[x].binary_search_by_key(&y, |e| e.0) {
            Ok(i) => self.rows[x][i].1[len - 1].clone(),
            Err(_) => Natural::ZERO,
        }
    }
}

fn walks_from(d: &Digraph, x: usize, horizon: usize) -> Vec<(usize, Vec<Natural>)> {
    let mut table: FxHashMap<usize, Vec<Natural>> = FxHashMap::default();
    let mut frontier: FxHashMap<usize, Natural> = FxHashMap::default();
    frontier.insert(x, Natural::ONE);
    for len in 1..=horizon {
        let mut next: FxHashMap<usize, Natural> = FxHashMap::default();
        for (&u, c) in &frontier {
            for &v in d.out_neighbors(u) {
                *next.entry(v).or_default() += c;
            }
        }
        if next.is_empty() {
            break;
        }
        for (&v, c) in &next {
            table.entry(v).or_insert_with(|| vec![Natural::ZERO; horizon])[len - 1] = c.clone();
        }
        frontier = next;
    }
    let mut row: Vec<_> = table.into_iter().collect();
    row.sort_unstable_by_key(|e| e.0);
    row
}

/// How per-length walk counts collapse into one ring weight.
pub trait WalkView {
    type Weight: RingWeight;

    /// `counts[i]` holds the number of walks with `i + 1` arcs.
    fn weight(&self, counts: &[Natural]) -> Self::Weight;
}

/// Total number of walks of any length up to the horizon.
#[derive(Clone, Copy, Debug, Default)]
pub struct Aggregate;

impl WalkView for Aggregate {
    type Weight = Natural;

    fn weight(&self, counts: &[Natural]) -> Natural {
        counts.iter().sum()
    }
}

/// `sum_len counts(len) * z^len`, truncated above degree `cap`.
#[derive(Clone, Copy, Debug)]
pub struct Polynomial {
    pub cap: usize,
}

impl WalkView for Polynomial {
    type Weight = TruncPoly;

    fn weight(&self, counts: &[Natural]) -> TruncPoly {
        let mut c = Vec::with_capacity(counts.len() + 1);
        c.push(Natural::ZERO);
        c.extend_from_slice(counts);
        TruncPoly::from_coeffs(c, self.cap)
    }
}

/// `sum_len counts(len) * z^(len - 1)`, truncated above degree `cap`.
///
/// A product of `k` such weights carries total walk length `k + d` in its
/// degree-`d` coefficient, so the truncation bound can be reduced by the
/// number of factors.
#[derive(Clone, Copy, Debug)]
pub struct ShiftedPolynomial {
    pub cap: usize,
}

impl WalkView for ShiftedPolynomial {
    type Weight = TruncPoly;

    fn weight(&self, counts: &[Natural]) -> TruncPoly {
        TruncPoly::from_coeffs(counts.to_vec(), self.cap)
    }
}

/// An arc of a [`WeightedDigraph`].
///
/// Every arc carries two weights. In an alternating cycle each source has
/// two out-arcs, one towards the previous sink (weighted by `left`) and one
/// towards the next sink (weighted by `right`). Undirected inputs give
/// `left == right`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedArc<W> {
    pub head: usize,
    pub left: W,
    pub right: W,
}

/// Digraph with ring-valued arc weights, optionally remembering the walk
/// counts it was built from.
#[derive(Clone, Debug)]
pub struct WeightedDigraph<W> {
    out: Vec<Vec<WeightedArc<W>>>,
    inn: Vec<Vec<(usize, usize)>>,
    graph: Digraph,
    right_walks: Option<Arc<WalkCounts>>,
    left_walks: Option<Arc<WalkCounts>>,
    horizon: usize,
}

/// Builds the weighted digraph whose arc `(x, y)` is weighted by the walks
/// from `x` to `y` of length at most `horizon` in `d`.
pub fn build_walk_weights<V: WalkView>(
    d: &Digraph,
    horizon: usize,
    view: &V,
) -> Result<WeightedDigraph<V::Weight>> {
    let walks = Arc::new(WalkCounts::compute(d, horizon)?);
    Ok(WeightedDigraph::from_walks(walks, None, horizon, view))
}

impl<W: RingWeight> WeightedDigraph<W> {
    /// Weights from precomputed walk counts, keeping lengths `<= horizon`.
    ///
    /// `right` supplies the right weights. `left` supplies the left weights
    /// and defaults to `right`.
    pub fn from_walks<V: WalkView<Weight = W>>(
        right: Arc<WalkCounts>,
        left: Option<Arc<WalkCounts>>,
        horizon: usize,
        view: &V,
    ) -> WeightedDigraph<W> {
        let n = right.vertex_count();
        let h = horizon.min(right.horizon());
        let mut arcs = Vec::new();
        match &left {
            None => {
                for x in 0..n {
                    for (y, c) in right.row(x) {
                        let w = view.weight(&c[..h]);
                        if !w.is_zero() {
                            arcs.push((x, *y, w.clone(), w));
                        }
                    }
                }
            }
            Some(lw) => {
                let hl = horizon.min(lw.horizon());
                let mut row: FxHashMap<usize, (W, W)> = FxHashMap::default();
                for x in 0..n {
                    row.clear();
                    for (y, c) in right.row(x) {
                        row.entry(*y).or_insert_with(|| (W::zero(), W::zero())).1 = view.weight(&c[..h]);
                    }
                    for (y, c) in lw.row(x) {
                        row.entry(*y).or_insert_with(|| (W::zero(), W::zero())).0 = view.weight(&c[..hl]);
                    }
                    for (y, (l, r)) in row.drain() {
                        if !l.is_zero() || !r.is_zero() {
                            arcs.push((x, y, l, r));
                        }
                    }
                }
            }
        }
        let mut g = Self::from_typed_arcs(n, arcs);
        g.right_walks = Some(right);
        g.left_walks = left;
        g.horizon = horizon;
        g
    }

    /// Arcs with one weight used on both sides.
    pub fn from_arcs(n: usize, arcs: Vec<(usize, usize, W)>) -> WeightedDigraph<W> {
        Self::from_typed_arcs(n, arcs.into_iter().map(|(u, v, w)| (u, v, w.clone(), w)).collect())
    }

    /// Arcs `(tail, head, left, right)`; arcs with both weights zero are dropped.
    pub fn from_typed_arcs(n: usize, arcs: Vec<(usize, usize, W, W)>) -> WeightedDigraph<W> {
        let mut out: Vec<Vec<WeightedArc<W>>> = (0..n).map(|_| Vec::new()).collect();
        for (u, v, left, right) in arcs {
            if !left.is_zero() || !right.is_zero() {
                out[u].push(WeightedArc { head: v, left, right });
            }
        }
        let mut inn = vec![Vec::new(); n];
        let mut pairs = Vec::new();
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_by_key(|a| a.head);
            for (slot, a) in list.iter().enumerate() {
                inn[a.head].push((u, slot));
                pairs.push((u, a.head));
            }
        }
        let graph = Digraph::from_arcs(n, &pairs).expect("one arc per ordered pair");
        WeightedDigraph { out, inn, graph, right_walks: None, left_walks: None, horizon: 1 }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn out_arcs(&self, u: usize) -> &[WeightedArc<W>] {
        &self.out[u]
    }

    /// `(tail, arc)` for every arc entering `v`.
    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = (usize, &WeightedArc<W>)> + '_ {
        self.inn[v].iter().map(move |&(u, slot)| (u, &self.out[u][slot]))
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// Arcs with a nonzero weight on either side.
    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Walks of exactly `len` arcs from `x` to `y` behind the right weights.
    /// Zero when no walk table is attached or `len` exceeds the horizon.
    pub fn walk_count(&self, x: usize, y: usize, len: usize) -> Natural {
        match &self.right_walks {
            Some(w) if len <= self.horizon => w.count(x, y, len),
            _ => Natural::ZERO,
        }
    }

    /// As [`WeightedDigraph::walk_count`], for the left weights.
    pub fn left_walk_count(&self, x: usize, y: usize, len: usize) -> Natural {
        match self.left_walks.as_ref().or(self.right_walks.as_ref()) {
            Some(w) if len <= self.horizon => w.count(x, y, len),
            _ => Natural::ZERO,
        }
    }

    /// The right-weight walk table, if any.
    pub fn walks(&self) -> Option<&WalkCounts> {
        self.right_walks.as_deref()
    }

    /// The left-weight walk table, if any.
    pub fn left_walks(&self) -> Option<&WalkCounts> {
        self.left_walks.as_deref().or(self.right_walks.as_deref())
    }
}

impl WeightedDigraph<Natural> {
    /// Every arc of `d` with weight 1 on both sides.
    pub fn unit(d: &Digraph) -> WeightedDigraph<Natural> {
        let arcs = d.arcs().into_iter().map(|(u, v)| (u, v, Natural::ONE)).collect();
        Self::from_arcs(d.vertex_count(), arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn path_walks() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let w = build_walk_weights(&d, 2, &Aggregate).unwrap();
        assert_eq!(w.walk_count(0, 1, 1), nat(1));
        assert_eq!(w.walk_count(1, 2, 1), nat(1));
        assert_eq!(w.walk_count(0, 2, 2), nat(1));
        assert_eq!(w.walk_count(0, 2, 1), nat(0));
        assert_eq!(w.walk_count(1, 0, 1), nat(0));
        assert_eq!(w.digraph().arc_count(), 3);
    }

    #[test]
    fn diamond_has_two_walks() {
        let d = Digraph::from_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let w = build_walk_weights(&d, 2, &Aggregate).unwrap();
        assert_eq!(w.walk_count(0, 3, 2), nat(2));
        let p = build_walk_weights(&d, 2, &Polynomial { cap: 5 }).unwrap();
        let arc = p.out_arcs(0).iter().find(|a| a.head == 3).unwrap();
        assert_eq!(arc.right, TruncPoly::monomial(2, nat(2), 5));
    }

    #[test]
    fn horizon_one_is_adjacency() {
        let d = Digraph::from_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let w = build_walk_weights(&d, 1, &Aggregate).unwrap();
        assert_eq!(w.digraph(), &d);
        assert!(w.out_arcs(0).iter().all(|a| a.right == nat(1)));
    }

    #[test]
    fn rejects_cycles_and_zero_horizon() {
        let c = Digraph::from_arcs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(build_walk_weights(&c, 2, &Aggregate).unwrap_err(), Error::NotAcyclic);
        let d = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert!(matches!(build_walk_weights(&d, 0, &Aggregate), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn shifted_view_drops_one_degree() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let w = build_walk_weights(&d, 2, &ShiftedPolynomial { cap: 3 }).unwrap();
        let arc = w.out_arcs(0).iter().find(|a| a.head == 2).unwrap();
        assert_eq!(arc.right, TruncPoly::monomial(1, nat(1), 3));
    }
}
