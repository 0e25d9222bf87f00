//! Combinatorial engine: weighted homomorphism counts of the alternating
//! cycle through low- and high-degree path tables.
//!
//! The alternating cycle with `p` sources has sinks `t_0, ..., t_{p-1}` and
//! sources `s_1, ..., s_p`, where `s_j` points to `t_{j-1}` through its left
//! weight and to `t_j` through its right weight. A path table of length `r`
//! sums the weight of the first `r` sources over images of `t_0` (`x`) and
//! `t_r` (`y`). Sinks are classified as low or high by their in-degree
//! against a threshold `delta`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ops::OpCounter;
use crate::ring::{Natural, RingWeight};
use crate::walk::{WeightedArc, WeightedDigraph};

#[inline]
pub(crate) fn pack(x: usize, y: usize) -> u64 {
    ((x as u64) << 32) | y as u64
}

#[inline]
pub(crate) fn unpack(k: u64) -> (usize, usize) {
    ((k >> 32) as usize, (k & 0xffff_ffff) as usize)
}

/// Direction in which a path is traced around the cycle.
///
/// `Forward` follows `t_0 -> t_1 -> ...`; `Backward` walks the other way, so
/// the roles of left and right weights swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hand {
    Forward,
    Backward,
}

impl Hand {
    #[inline]
    pub(crate) fn first<W>(self, a: &WeightedArc<W>) -> &W {
        match self {
            Hand::Forward => &a.left,
            Hand::Backward => &a.right,
        }
    }

    #[inline]
    pub(crate) fn second<W>(self, a: &WeightedArc<W>) -> &W {
        match self {
            Hand::Forward => &a.right,
            Hand::Backward => &a.left,
        }
    }
}

/// Low/high class of each sink `t_1, ..., t_r` of a path, bit `j - 1` set
/// when `t_j` is high.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSignature {
    pub bits: u32,
    pub len: usize,
}

impl DegreeSignature {
    pub fn from_classes(high: &[bool]) -> DegreeSignature {
        let bits = high.iter().enumerate().fold(0, |b, (i, &h)| b | ((h as u32) << i));
        DegreeSignature { bits, len: high.len() }
    }

    pub fn is_high(&self, j: usize) -> bool {
        self.bits >> (j - 1) & 1 == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// Every internal sink is low; endpoints are unrestricted.
    LowAll,
    /// `x` is high and the sinks after it follow the signature.
    HighSignature(DegreeSignature),
}

/// Sparse map from sink pairs `(x, y)` to path weights. Zero weights are
/// never stored.
#[derive(Clone, Debug)]
pub struct PathTable<W> {
    pub kind: TableKind,
    pub r: usize,
    pub threshold: usize,
    pub(crate) entries: FxHashMap<u64, W>,
}

impl<W: RingWeight> PathTable<W> {
    pub fn get(&self, x: usize, y: usize) -> Option<&W> {
        self.entries.get(&pack(x, y))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by `(x, y)`.
    pub fn sorted_entries(&self) -> Vec<(usize, usize, &W)> {
        let mut v: Vec<_> = self.entries.iter().map(|(&k, w)| (k, w)).collect();
        v.sort_unstable_by_key(|e| e.0);
        v.into_iter()
            .map(|(k, w)| {
                let (x, y) = unpack(k);
                (x, y, w)
            })
            .collect()
    }
}

type Map<W> = FxHashMap<u64, W>;

fn bump<W: RingWeight>(map: &mut Map<W>, key: u64, a: &W, b: &W) {
    map.entry(key).or_insert_with(W::zero).add_mul(a, b);
}

/// Sum over common in-neighbors `z` of `first(z, x) * second(z, y)`.
pub(crate) fn cherry<W: RingWeight>(w: &WeightedDigraph<W>, hand: Hand, ops: &OpCounter) -> Map<W> {
    let mut t = Map::default();
    let mut count = 0u64;
    for z in 0..w.vertex_count() {
        let arcs = w.out_arcs(z);
        for a in arcs {
            let f = hand.first(a);
            if f.is_zero() {
                continue;
            }
            for b in arcs {
                let s = hand.second(b);
                if !s.is_zero() {
                    bump(&mut t, pack(a.head, b.head), f, s);
                    count += 1;
                }
            }
        }
    }
    ops.add(count);
    t.retain(|_, v| !v.is_zero());
    t
}

fn low_table<W: RingWeight>(
    w: &WeightedDigraph<W>,
    r: usize,
    delta: usize,
    hand: Hand,
    ops: &OpCounter,
) -> Map<W> {
    extend_low(w, cherry(w, hand, ops), r, delta, hand, ops)
}

/// One table per signature (indexed by its bits), all anchored at high `x`.
fn high_tables<W: RingWeight>(
    w: &WeightedDigraph<W>,
    r: usize,
    delta: usize,
    hand: Hand,
    base: &Map<W>,
    ops: &OpCounter,
) -> Vec<Map<W>> {
    let high = |v: usize| w.in_degree(v) > delta;
    let mut tables: Vec<Map<W>> = vec![Map::default(), Map::default()];
    for (&k, val) in base {
        let (x, y) = unpack(k);
        if high(x) {
            tables[high(y) as usize].insert(k, val.clone());
        }
    }
    ops.add(base.len() as u64);
    for step in 2..=r {
        let mut next: Vec<Map<W>> = (0..1usize << step).map(|_| Map::default()).collect();
        let mut count = 0u64;
        for (g, table) in tables.iter().enumerate() {
            for (&k, val) in table {
                let (x, v) = unpack(k);
                for (u, arc) in w.in_arcs(v) {
                    let f = hand.first(arc);
                    count += 1;
                    if f.is_zero() {
                        continue;
                    }
                    let a = val.mul(f);
                    for b in w.out_arcs(u) {
                        let s = hand.second(b);
                        if !s.is_zero() {
                            let sig = g | (high(b.head) as usize) << (step - 1);
                            bump(&mut next[sig], pack(x, b.head), &a, s);
                            count += 1;
                        }
                    }
                }
            }
        }
        ops.add(count);
        for t in &mut next {
            t.retain(|_, v| !v.is_zero());
        }
        tables = next;
    }
    tables
}

/// Paths of `r` sources whose internal sinks all have in-degree `<= delta`.
pub fn path_table_low<W: RingWeight>(
    w: &WeightedDigraph<W>,
    r: usize,
    delta: usize,
) -> Result<PathTable<W>> {
    if r < 1 {
        return Err(Error::InvalidParameter("path length must be at least 1".into()));
    }
    let entries = low_table(w, r, delta, Hand::Forward, &OpCounter::new());
    Ok(PathTable { kind: TableKind::LowAll, r, threshold: delta, entries })
}

/// Paths of `r` sources starting at a sink of in-degree `> delta`, with the
/// classes of `t_1, ..., t_r` fixed by `f`.
pub fn path_table_high<W: RingWeight>(
    w: &WeightedDigraph<W>,
    r: usize,
    delta: usize,
    f: DegreeSignature,
) -> Result<PathTable<W>> {
    if r < 1 {
        return Err(Error::InvalidParameter("path length must be at least 1".into()));
    }
    if f.len != r || (r < 32 && f.bits >> r != 0) {
        return Err(Error::InvalidParameter(format!(
            "signature covers {} sinks, path has {r}",
            f.len
        )));
    }
    let ops = OpCounter::new();
    let base = cherry(w, Hand::Forward, &ops);
    let mut tables = high_tables(w, r, delta, Hand::Forward, &base, &ops);
    let entries = std::mem::take(&mut tables[f.bits as usize]);
    Ok(PathTable { kind: TableKind::HighSignature(f), r, threshold: delta, entries })
}

/// Smallest integer `t >= 1` with `t^e >= n`.
pub fn ceil_root(n: usize, e: u32) -> usize {
    let mut t = ((n as f64).powf(1.0 / e as f64).floor() as usize).max(1);
    while t > 1 && (t - 1).checked_pow(e).is_none_or(|v| v >= n) {
        t -= 1;
    }
    while t.checked_pow(e).is_some_and(|v| v < n) {
        t += 1;
    }
    t
}

/// Threshold used by [`hom_alt_cycle_comb`] for `n` vertices and `p` sources.
pub fn comb_threshold(n: usize, p: usize) -> usize {
    ceil_root(n, p.div_ceil(2) as u32).max(1)
}

/// Total weight of homomorphisms from the alternating cycle with `p` sources
/// into `w`.
pub fn hom_alt_cycle_comb<W: RingWeight>(w: &WeightedDigraph<W>, p: usize) -> Result<W> {
    hom_alt_cycle_comb_counted(w, p, &OpCounter::new())
}

/// [`hom_alt_cycle_comb`] with elementary operations added to `ops`.
pub fn hom_alt_cycle_comb_counted<W: RingWeight>(
    w: &WeightedDigraph<W>,
    p: usize,
    ops: &OpCounter,
) -> Result<W> {
    let delta = comb_threshold(w.vertex_count(), p);
    hom_alt_cycle_comb_with_threshold(w, p, delta, ops)
}

/// [`hom_alt_cycle_comb`] with an explicit degree threshold. Any threshold
/// gives the same total; it only moves work between the low and high parts.
pub fn hom_alt_cycle_comb_with_threshold<W: RingWeight>(
    w: &WeightedDigraph<W>,
    p: usize,
    delta: usize,
    ops: &OpCounter,
) -> Result<W> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("alternating cycle needs at least 2 sources, got {p}")));
    }
    if p > 31 {
        return Err(Error::InvalidParameter("at most 31 sources are supported".into()));
    }
    let r = p / 2;
    let r2 = p - r;
    let low = |v: usize| w.in_degree(v) <= delta;

    let fwd_base = cherry(w, Hand::Forward, ops);
    let bwd_base = cherry(w, Hand::Backward, ops);
    let nf = extend_low(w, fwd_base.clone(), r, delta, Hand::Forward, ops);
    let nb = extend_low(w, bwd_base.clone(), r2, delta, Hand::Backward, ops);

    let mut total = W::zero();
    let mut probes = 0u64;
    for (&k, a) in &nf {
        let (x, y) = unpack(k);
        probes += 1;
        if low(x) && low(y) {
            if let Some(b) = nb.get(&k) {
                total.add_mul(a, b);
            }
        }
    }

    let mf = high_tables(w, r, delta, Hand::Forward, &fwd_base, ops);
    let mb = high_tables(w, r2, delta, Hand::Backward, &bwd_base, ops);
    let mut joined: FxHashMap<(usize, usize), W> = FxHashMap::default();
    for i in 0..p {
        // Sinks before the anchor are low, the anchor is high, the rest vary.
        let free = p - 1 - i;
        for rest in 0..1usize << free {
            let g = (1usize << i) | (rest << (i + 1));
            let bit = |pos: usize| g >> (pos % p) & 1;
            let f = (1..=r).fold(0, |s, j| s | bit(i + j) << (j - 1));
            let f2 = (1..=r2).fold(0, |s, j| s | bit(i + p - j) << (j - 1));
            let val = joined.entry((f, f2)).or_insert_with(|| {
                let (small, large, swap) =
                    if mf[f].len() <= mb[f2].len() { (&mf[f], &mb[f2], false) } else { (&mb[f2], &mf[f], true) };
                let mut acc = W::zero();
                for (k, a) in small {
                    probes += 1;
                    if let Some(b) = large.get(k) {
                        if swap {
                            acc.add_mul(b, a);
                        } else {
                            acc.add_mul(a, b);
                        }
                    }
                }
                acc
            });
            total.add_assign(val);
        }
    }
    ops.add(probes);
    Ok(total)
}

fn extend_low<W: RingWeight>(
    w: &WeightedDigraph<W>,
    base: Map<W>,
    r: usize,
    delta: usize,
    hand: Hand,
    ops: &OpCounter,
) -> Map<W> {
    if r == 1 {
        return base;
    }
    let mut t = base;
    for _ in 2..=r {
        let mut next = Map::default();
        let mut count = 0u64;
        for (&k, val) in &t {
            let (x, v) = unpack(k);
            if w.in_degree(v) > delta {
                continue;
            }
            for (u, arc) in w.in_arcs(v) {
                let f = hand.first(arc);
                count += 1;
                if f.is_zero() {
                    continue;
                }
                let a = val.mul(f);
                for b in w.out_arcs(u) {
                    let s = hand.second(b);
                    if !s.is_zero() {
                        bump(&mut next, pack(x, b.head), &a, s);
                        count += 1;
                    }
                }
            }
        }
        ops.add(count);
        next.retain(|_, v| !v.is_zero());
        t = next;
    }
    t
}

/// Homomorphisms of two internally disjoint directed paths with `x1` and
/// `x2` arcs sharing both endpoints: `sum_{u,v} w_x1(u, v) * w_x2(u, v)`,
/// where the first path uses the right walk table and the second the left.
pub fn hom_two_paths<W: RingWeight>(w: &WeightedDigraph<W>, x1: usize, x2: usize) -> Result<Natural> {
    if x1 < 1 || x2 < 1 {
        return Err(Error::InvalidParameter("path lengths must be positive".into()));
    }
    if x1 > w.horizon() || x2 > w.horizon() {
        return Err(Error::InvalidParameter(format!(
            "path lengths ({x1}, {x2}) exceed the walk horizon {}",
            w.horizon()
        )));
    }
    let (right, left) = match (w.walks(), w.left_walks()) {
        (Some(r), Some(l)) => (r, l),
        _ => return Err(Error::Usage("weighted digraph carries no walk table".into())),
    };
    let mut total = Natural::ZERO;
    for u in 0..w.vertex_count() {
        let lrow = left.row(u);
        for (v, counts) in right.row(u) {
            let a = &counts[x1 - 1];
            if a.is_zero() {
                continue;
            }
            if let Ok(i) = lrow.binary_search_by_key(v, |e| e.0) {
                total.add_mul(a, &lrow[i].1[x2 - 1]);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::walk::{build_walk_weights, Aggregate};

    fn unit(n: usize, arcs: &[(usize, usize)]) -> WeightedDigraph<Natural> {
        WeightedDigraph::unit(&Digraph::from_arcs(n, arcs).unwrap())
    }

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn cherry_low_table() {
        // z = 0, x = 1, y = 2
        let w = unit(3, &[(0, 1), (0, 2)]);
        let t = path_table_low(&w, 1, 3).unwrap();
        let e: Vec<_> = t.sorted_entries().into_iter().map(|(x, y, v)| (x, y, v.clone())).collect();
        assert_eq!(e, vec![(1, 1, n(1)), (1, 2, n(1)), (2, 1, n(1)), (2, 2, n(1))]);
    }

    #[test]
    fn single_edge_tables() {
        let w = unit(2, &[(0, 1)]);
        let t = path_table_low(&w, 1, 2).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(1, 1), Some(&n(1)));
        let h = path_table_high(&w, 1, 0, DegreeSignature::from_classes(&[true])).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.get(1, 1), Some(&n(1)));
    }

    #[test]
    fn high_table_on_cherry_with_zero_threshold() {
        let w = unit(3, &[(0, 1), (0, 2)]);
        let h = path_table_high(&w, 1, 0, DegreeSignature::from_classes(&[true])).unwrap();
        assert_eq!(h.get(1, 2), Some(&n(1)));
        let none = path_table_high(&w, 1, 5, DegreeSignature::from_classes(&[true])).unwrap();
        assert!(none.is_empty());
        let bad = path_table_high(&w, 2, 0, DegreeSignature::from_classes(&[true]));
        assert!(bad.is_err());
    }

    #[test]
    fn edgeless_tables_are_empty() {
        let w = unit(4, &[]);
        assert!(path_table_low(&w, 2, 1).unwrap().is_empty());
        assert_eq!(hom_alt_cycle_comb(&w, 3).unwrap(), n(0));
    }

    #[test]
    fn small_alternating_counts() {
        assert_eq!(hom_alt_cycle_comb(&unit(3, &[(0, 1), (0, 2)]), 2).unwrap(), n(4));
        assert_eq!(hom_alt_cycle_comb(&unit(2, &[(0, 1)]), 2).unwrap(), n(1));
        assert!(hom_alt_cycle_comb(&unit(2, &[(0, 1)]), 1).is_err());
    }

    #[test]
    fn two_paths_examples() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = build_walk_weights(&d, 2, &Aggregate).unwrap();
        assert_eq!(hom_two_paths(&w, 1, 2).unwrap(), n(1));
        assert_eq!(hom_two_paths(&w, 2, 1).unwrap(), n(1));
        assert!(hom_two_paths(&w, 1, 3).is_err());
        let p = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = build_walk_weights(&p, 2, &Aggregate).unwrap();
        assert_eq!(hom_two_paths(&w, 1, 2).unwrap(), n(0));
    }

    #[test]
    fn ceil_root_is_exact() {
        assert_eq!(ceil_root(1, 2), 1);
        assert_eq!(ceil_root(16, 2), 4);
        assert_eq!(ceil_root(17, 2), 5);
        assert_eq!(ceil_root(27, 3), 3);
        assert_eq!(ceil_root(28, 3), 4);
        assert_eq!(ceil_root(1000, 1), 1000);
    }
}
