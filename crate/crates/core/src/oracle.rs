//! Brute-force reference counts.
//!
//! Everything here is deliberately naive and shares no code with the
//! counting engines, so the two can check each other.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{ArcSource, Digraph};
use crate::ring::Natural;

/// Size limits for [`hom_count_brute_limited`].
#[derive(Clone, Copy, Debug)]
pub struct BruteLimits {
    pub pattern_vertices: usize,
    pub target_vertices: usize,
}

impl Default for BruteLimits {
    fn default() -> Self {
        BruteLimits { pattern_vertices: 12, target_vertices: 16 }
    }
}

fn matrix<G: ArcSource + ?Sized>(g: &G) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.arc_list() {
        m[u][v] = true;
    }
    m
}

/// Number of maps `V(h) -> V(g)` sending every arc of `h` to an arc of `g`.
/// Undirected graphs count as symmetric digraphs.
pub fn hom_count_brute<H: ArcSource + ?Sized, G: ArcSource + ?Sized>(h: &H, g: &G) -> Result<Natural> {
    hom_count_brute_limited(h, g, BruteLimits::default())
}

pub fn hom_count_brute_limited<H: ArcSource + ?Sized, G: ArcSource + ?Sized>(
    h: &H,
    g: &G,
    limits: BruteLimits,
) -> Result<Natural> {
    let (hn, gn) = (h.vertex_count(), g.vertex_count());
    if hn > limits.pattern_vertices || gn > limits.target_vertices {
        return Err(Error::Budget(format!(
            "brute-force homomorphism count limited to {} -> {} vertices, got {hn} -> {gn}",
            limits.pattern_vertices, limits.target_vertices
        )));
    }
    let hm = matrix(h);
    let gm = matrix(g);
    let mut image = vec![0usize; hn];
    Ok(Natural::from(BigUint::from(extend(&hm, &gm, &mut image, 0))))
}

fn extend(h: &[Vec<bool>], g: &[Vec<bool>], image: &mut [usize], i: usize) -> u128 {
    if i == h.len() {
        return 1;
    }
    let mut total = 0;
    'candidates: for c in 0..g.len() {
        if h[i][i] && !g[c][c] {
            continue;
        }
        for j in 0..i {
            if (h[j][i] && !g[image[j]][c]) || (h[i][j] && !g[c][image[j]]) {
                continue 'candidates;
            }
        }
        image[i] = c;
        total += extend(h, g, image, i + 1);
    }
    total
}

/// `trace(A^k)` by exact walk propagation, i.e. the number of closed walks
/// of length `k`.
pub fn trace_power<G: ArcSource + ?Sized>(g: &G, k: usize) -> Result<Natural> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::Budget(format!("trace oracle limited to 64 vertices, got {n}")));
    }
    let m = matrix(g);
    let mut total = BigUint::from(0u32);
    for s in 0..n {
        let mut vec = vec![BigUint::from(0u32); n];
        vec[s] = BigUint::from(1u32);
        for _ in 0..k {
            let mut next = vec![BigUint::from(0u32); n];
            for u in 0..n {
                if vec[u] == BigUint::from(0u32) {
                    continue;
                }
                for v in 0..n {
                    if m[u][v] {
                        next[v] += &vec[u];
                    }
                }
            }
            vec = next;
        }
        total += &vec[s];
    }
    Ok(Natural::from(total))
}

/// One orientation of the labeled cycle `0 - 1 - ... - (l-1) - 0`.
#[derive(Clone, Debug)]
pub struct CycleOrientation {
    /// Bit `i` set means edge `{i, i+1}` points from `i` to `i + 1`.
    pub mask: u32,
    pub digraph: Digraph,
    pub acyclic: bool,
    /// Vertices with no incoming arc.
    pub sources: usize,
}

/// All `2^l` orientations of the labeled `l`-cycle.
pub fn enumerate_cycle_orientations(l: usize) -> Result<Vec<CycleOrientation>> {
    if !(3..=12).contains(&l) {
        return Err(Error::InvalidParameter(format!("cycle length must be in 3..=12, got {l}")));
    }
    let mut out = Vec::with_capacity(1 << l);
    for mask in 0u32..1 << l {
        let arcs: Vec<_> = (0..l)
            .map(|i| {
                let j = (i + 1) % l;
                if mask >> i & 1 == 1 {
                    (i, j)
                } else {
                    (j, i)
                }
            })
            .collect();
        let digraph = Digraph::from_arcs(l, &arcs).expect("cycle arcs are distinct");
        let mut indeg = vec![0; l];
        for &(_, v) in &arcs {
            indeg[v] += 1;
        }
        let sources = indeg.iter().filter(|&&d| d == 0).count();
        let acyclic = mask != 0 && mask != (1 << l) - 1;
        out.push(CycleOrientation { mask, digraph, acyclic, sources });
    }
    Ok(out)
}

/// Whether `g` has a simple cycle with exactly `k` vertices (directed when
/// `g` is directed). Limited to 14 vertices.
pub fn has_simple_cycle_brute<G: ArcSource + ?Sized>(g: &G, k: usize) -> Result<bool> {
    has_simple_cycle_brute_limited(g, k, 14)
}

pub fn has_simple_cycle_brute_limited<G: ArcSource + ?Sized>(g: &G, k: usize, limit: usize) -> Result<bool> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::Budget(format!("simple-cycle search limited to {limit} vertices, got {n}")));
    }
    let m = matrix(g);
    let symmetric = (0..n).all(|u| (0..n).all(|v| m[u][v] == m[v][u]));
    if k < 2 || (symmetric && k < 3) {
        return Ok(false);
    }
    let mut path = Vec::with_capacity(k);
    let mut used = vec![false; n];
    for s in 0..n {
        path.push(s);
        used[s] = true;
        if search(&m, s, &mut path, &mut used, k) {
            return Ok(true);
        }
        used[s] = false;
        path.pop();
    }
    Ok(false)
}

fn search(m: &[Vec<bool>], s: usize, path: &mut Vec<usize>, used: &mut [bool], k: usize) -> bool {
    let last = *path.last().expect("nonempty");
    if path.len() == k {
        return m[last][s];
    }
    for v in s + 1..m.len() {
        if !used[v] && m[last][v] {
            used[v] = true;
            path.push(v);
            let hit = search(m, s, path, used, k);
            path.pop();
            used[v] = false;
            if hit {
                return true;
            }
        }
    }
    false
}

/// Closed walks `v_0 -> ... -> v_{p-1} -> v_0` whose vertices lie in `p`
/// pairwise distinct parts (`part[v]` in `0..p`, or `usize::MAX` for none).
pub fn transversal_homs_brute<G: ArcSource + ?Sized>(g: &G, part: &[usize], p: usize) -> Result<Natural> {
    let n = g.vertex_count();
    if part.len() != n {
        return Err(Error::InvalidParameter("part labels must cover every vertex".into()));
    }
    let m = matrix(g);
    let mut total = 0u128;
    let mut walk = Vec::with_capacity(p);
    for s in 0..n {
        if part[s] >= p {
            continue;
        }
        walk.push(s);
        total += transversal_walks(&m, part, p, &mut walk, 1u64 << part[s]);
        walk.pop();
    }
    Ok(Natural::from(BigUint::from(total)))
}

fn transversal_walks(m: &[Vec<bool>], part: &[usize], p: usize, walk: &mut Vec<usize>, seen: u64) -> u128 {
    let last = *walk.last().expect("nonempty");
    if walk.len() == p {
        return m[last][walk[0]] as u128;
    }
    let mut total = 0;
    for v in 0..m.len() {
        if m[last][v] && part[v] < p && seen >> part[v] & 1 == 0 {
            walk.push(v);
            total += transversal_walks(m, part, p, walk, seen | 1 << part[v]);
            walk.pop();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named, Graph};

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn small_hom_counts() {
        assert_eq!(hom_count_brute(&named::cycle(3), &named::complete(3)).unwrap(), n(6));
        let arc = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(hom_count_brute(&arc, &arc).unwrap(), n(1));
        assert_eq!(hom_count_brute(&named::cycle(4), &Graph::empty(5, false)).unwrap(), n(0));
        assert!(hom_count_brute(&named::cycle(13), &named::complete(3)).is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_power(&named::complete(3), 3).unwrap(), n(6));
        assert_eq!(trace_power(&named::complete(3), 4).unwrap(), n(18));
        assert_eq!(trace_power(&named::directed_path(5), 4).unwrap(), n(0));
    }

    #[test]
    fn orientation_census() {
        let o3 = enumerate_cycle_orientations(3).unwrap();
        assert_eq!(o3.iter().filter(|o| o.acyclic).count(), 6);
        let o4 = enumerate_cycle_orientations(4).unwrap();
        assert_eq!(o4.iter().filter(|o| o.acyclic).count(), 14);
        assert_eq!(o4.iter().filter(|o| o.acyclic && o.sources == 2).count(), 2);
        for l in 3..=8 {
            let all = enumerate_cycle_orientations(l).unwrap();
            assert!(all.iter().all(|o| o.acyclic == o.digraph.is_dag()));
            assert!(all.iter().filter(|o| o.acyclic).all(|o| o.sources >= 1));
        }
    }

    #[test]
    fn simple_cycle_search() {
        assert!(has_simple_cycle_brute(&named::directed_cycle(3), 3).unwrap());
        assert!(!has_simple_cycle_brute(&named::directed_path(6), 3).unwrap());
        assert!(!has_simple_cycle_brute(&named::cycle(4), 3).unwrap());
        assert!(has_simple_cycle_brute(&named::cycle(4), 4).unwrap());
    }

    #[test]
    fn transversal_examples() {
        let c4 = named::cycle(4);
        assert_eq!(transversal_homs_brute(&c4, &[0, 1, 2, 3], 4).unwrap(), n(8));
        assert_eq!(transversal_homs_brute(&named::complete(3), &[0, 1, 2], 3).unwrap(), n(6));
        assert_eq!(transversal_homs_brute(&c4, &[0, 0, 1, 1], 2).unwrap(), n(4));
    }

    #[test]
    fn two_oracles_agree() {
        for k in 3..=7 {
            for g in [named::complete(4), named::cycle(5), named::star(3)] {
                assert_eq!(hom_count_brute(&named::cycle(k), &g).unwrap(), trace_power(&g, k).unwrap());
            }
        }
    }
}
