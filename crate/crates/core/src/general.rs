//! Cycle homomorphism counts in arbitrary graphs and digraphs through
//! low/high walk tables, and color-coded directed cycle detection built on
//! top of them.
//!
//! A closed walk `c_0 -> c_1 -> ... -> c_{k-1} -> c_0` is split at `c_0` and
//! `c_r` into a forward walk of `r = k / 2` steps and a backward walk of the
//! remaining steps. Vertices are low when their degree (in plus out for
//! digraphs) is at most `delta` and high otherwise. Walks whose inner
//! vertices are all low are enumerated directly; walks touching a high
//! vertex are anchored at the first high vertex of the cycle.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::comb::{ceil_root, pack, unpack, DegreeSignature, PathTable, TableKind};
use crate::detection::{layered_core, repetition_rng};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ops::OpCounter;
use crate::ring::Natural;

type Map = FxHashMap<u64, Natural>;

/// Which table [`path_table_general`] builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneralMode {
    /// Walks with all inner vertices low.
    Low,
    /// Walks from a high vertex, inner vertices and endpoint classed by the
    /// signature.
    High(DegreeSignature),
}

struct Walker<'a> {
    g: &'a Graph,
    delta: usize,
    backward: bool,
}

impl Walker<'_> {
    fn next(&self, v: usize) -> &[usize] {
        if self.backward {
            self.g.in_neighbors(v)
        } else {
            self.g.neighbors(v)
        }
    }

    fn high(&self, v: usize) -> bool {
        self.g.degree(v) > self.delta
    }

    fn low_table(&self, r: usize, ops: &mut u64) -> Map {
        let mut t = Map::default();
        for x in 0..self.g.vertex_count() {
            for &y in self.next(x) {
                t.insert(pack(x, y), Natural::ONE);
                *ops += 1;
            }
        }
        for _ in 2..=r {
            let mut next = Map::default();
            for (&k, c) in &t {
                let (x, v) = unpack(k);
                if self.high(v) {
                    continue;
                }
                for &y in self.next(v) {
                    *next.entry(pack(x, y)).or_default() += c;
                    *ops += 1;
                }
            }
            t = next;
        }
        t
    }

    fn high_tables(&self, r: usize, ops: &mut u64) -> Vec<Map> {
        let mut tables = vec![Map::default(), Map::default()];
        for x in (0..self.g.vertex_count()).filter(|&x| self.high(x)) {
            for &y in self.next(x) {
                tables[self.high(y) as usize].insert(pack(x, y), Natural::ONE);
                *ops += 1;
            }
        }
        for step in 2..=r {
            let mut next: Vec<Map> = (0..1usize << step).map(|_| Map::default()).collect();
            for (sig, table) in tables.iter().enumerate() {
                for (&k, c) in table {
                    let (x, v) = unpack(k);
                    for &y in self.next(v) {
                        let s = sig | (self.high(y) as usize) << (step - 1);
                        *next[s].entry(pack(x, y)).or_default() += c;
                        *ops += 1;
                    }
                }
            }
            tables = next;
        }
        tables
    }
}

/// Walk table of length `r` in `g` (along arc directions for digraphs).
pub fn path_table_general(g: &Graph, r: usize, delta: usize, mode: GeneralMode) -> Result<PathTable<Natural>> {
    if r < 1 {
        return Err(Error::InvalidParameter("walk length must be at least 1".into()));
    }
    let walker = Walker { g, delta, backward: false };
    let mut ops = 0;
    let (kind, entries) = match mode {
        GeneralMode::Low => (TableKind::LowAll, walker.low_table(r, &mut ops)),
        GeneralMode::High(f) => {
            if f.len != r || f.bits >> r != 0 {
                return Err(Error::InvalidParameter(format!(
                    "signature covers {} vertices, walk has {r}",
                    f.len
                )));
            }
            let mut t = walker.high_tables(r, &mut ops);
            (TableKind::HighSignature(f), std::mem::take(&mut t[f.bits as usize]))
        }
    };
    Ok(PathTable { kind, r, threshold: delta, entries })
}

/// Threshold used by [`hom_cycle_general`]: `ceil(m^(1 / ceil(k/2)))`.
pub fn general_threshold(m: usize, k: usize) -> usize {
    ceil_root(m, k.div_ceil(2) as u32)
}

/// `hom(C_k, g)`: closed walks of length `k`, directed when `g` is.
pub fn hom_cycle_general(g: &Graph, k: usize) -> Result<Natural> {
    hom_cycle_general_counted(g, k, &OpCounter::new())
}

pub fn hom_cycle_general_counted(g: &Graph, k: usize, ops: &OpCounter) -> Result<Natural> {
    hom_cycle_general_with_threshold(g, k, general_threshold(g.edge_count(), k), ops)
}

/// [`hom_cycle_general`] with an explicit degree threshold.
pub fn hom_cycle_general_with_threshold(g: &Graph, k: usize, delta: usize, ops: &OpCounter) -> Result<Natural> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {k}")));
    }
    if k > 32 {
        return Err(Error::InvalidParameter("cycle length at most 32 is supported".into()));
    }
    let r = k / 2;
    let r2 = k - r;
    let fwd = Walker { g, delta, backward: false };
    let bwd = Walker { g, delta, backward: g.is_directed() };
    let mut count = 0u64;

    let nf = fwd.low_table(r, &mut count);
    let nb = bwd.low_table(r2, &mut count);
    let mut total = Natural::ZERO;
    for (key, a) in &nf {
        let (x, y) = unpack(*key);
        count += 1;
        if !fwd.high(x) && !fwd.high(y) {
            if let Some(b) = nb.get(key) {
                total.add_mul(a, b);
            }
        }
    }

    let mf = fwd.high_tables(r, &mut count);
    let mb = bwd.high_tables(r2, &mut count);
    let mut joined: FxHashMap<(usize, usize), Natural> = FxHashMap::default();
    for i in 0..k {
        for rest in 0..1usize << (k - 1 - i) {
            let sig = (1usize << i) | (rest << (i + 1));
            let bit = |pos: usize| sig >> (pos % k) & 1;
            let f = (1..=r).fold(0, |s, j| s | bit(i + j) << (j - 1));
            let f2 = (1..=r2).fold(0, |s, j| s | bit(i + k - j) << (j - 1));
            let val = joined.entry((f, f2)).or_insert_with(|| {
                let (small, large) = if mf[f].len() <= mb[f2].len() { (&mf[f], &mb[f2]) } else { (&mb[f2], &mf[f]) };
                let mut acc = Natural::ZERO;
                for (key, a) in small {
                    count += 1;
                    if let Some(b) = large.get(key) {
                        acc.add_mul(a, b);
                    }
                }
                acc
            });
            total += &*val;
        }
    }
    ops.add(count);
    Ok(total)
}

/// Color-coded search for a directed simple cycle of length `k`.
///
/// Each repetition colors vertices uniformly with `k` colors and keeps only
/// arcs from color `i` to color `i + 1 (mod k)`. Every closed `k`-walk in
/// that layered digraph is a simple cycle, so a positive count is a witness
/// and the answer is never a false positive.
pub fn detect_cycle_general_directed(g: &Graph, k: usize, reps: usize, seed: u64) -> Result<bool> {
    if !g.is_directed() {
        return Err(Error::Usage("directed detection needs a directed graph".into()));
    }
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {k}")));
    }
    let hits = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<bool> {
            let mut rng = repetition_rng(seed, rep);
            let Some((layered, _)) = layered_core(g, k, &mut rng) else {
                return Ok(false);
            };
            Ok(!hom_cycle_general(&layered, k)?.is_zero())
        })
        .find_any(|r| !matches!(r, Ok(false)));
    hits.unwrap_or(Ok(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn closed_walk_examples() {
        assert_eq!(hom_cycle_general(&named::complete(4), 3).unwrap(), n(24));
        assert_eq!(hom_cycle_general(&named::directed_cycle(3), 3).unwrap(), n(3));
        let tree = named::star(5);
        for k in [3, 5, 7] {
            assert_eq!(hom_cycle_general(&tree, k).unwrap(), n(0));
        }
        assert!(hom_cycle_general(&tree, 2).is_err());
    }

    #[test]
    fn walk_tables_on_a_path() {
        let g = named::path(3);
        let t = path_table_general(&g, 2, 2, GeneralMode::Low).unwrap();
        assert_eq!(t.get(0, 2), Some(&n(1)));
        assert_eq!(t.get(2, 0), Some(&n(1)));
        assert_eq!(t.get(0, 0), Some(&n(1)));
        assert_eq!(t.get(1, 1), Some(&n(2)));
        assert_eq!(t.get(0, 1), None);
        let e = path_table_general(&named::path(2), 1, 1, GeneralMode::Low).unwrap();
        assert_eq!(e.sorted_entries().len(), 2);
        let none = path_table_general(&g, 2, 2, GeneralMode::High(DegreeSignature::from_classes(&[false, true])));
        assert!(none.unwrap().is_empty());
    }

    #[test]
    fn directed_detection_examples() {
        assert!(detect_cycle_general_directed(&named::directed_cycle(4), 4, 400, 1).unwrap());
        let dag = named::directed_path(8).to_graph().unwrap();
        assert!(!detect_cycle_general_directed(&dag, 3, 50, 1).unwrap());
        assert!(!detect_cycle_general_directed(&named::directed_cycle(3), 4, 200, 1).unwrap());
    }
}
