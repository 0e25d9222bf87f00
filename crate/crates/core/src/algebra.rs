//! Tensor products, blowups, and recovery of individual homomorphism counts
//! from an oracle for a fixed linear combination of them.
//!
//! Homomorphism counts are multiplicative over the tensor product:
//! `hom(H, A x B) = hom(H, A) * hom(H, B)`. Evaluating a combination
//! `sum_j c_j hom(H_j, .)` on `F_i x G` for suitable probes `F_i` therefore
//! gives a square linear system in the unknowns `hom(H_j, G)`. Blowups of the
//! patterns themselves serve as probes; sizes are searched at random until
//! the system matrix is invertible.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::ring::Natural;

/// Vertex budget of [`tensor_product`].
pub const DEFAULT_PRODUCT_BUDGET: usize = 1 << 22;

/// Largest pattern accepted by [`canonical_code`].
pub const MAX_CANONICAL_VERTICES: usize = 8;

/// Tensor (categorical) product: `(a, b) -> (c, d)` is an arc when `a -> c`
/// and `b -> d` both are. Vertex `(a, b)` gets id `a * v(d2) + b`.
pub fn tensor_product(d1: &Digraph, d2: &Digraph) -> Result<Digraph> {
    tensor_product_with_budget(d1, d2, DEFAULT_PRODUCT_BUDGET)
}

pub fn tensor_product_with_budget(d1: &Digraph, d2: &Digraph, max_vertices: usize) -> Result<Digraph> {
    let (n1, n2) = (d1.vertex_count(), d2.vertex_count());
    let n = n1.checked_mul(n2).filter(|&n| n <= max_vertices).ok_or_else(|| {
        Error::Budget(format!("tensor product of {n1} and {n2} vertices exceeds {max_vertices}"))
    })?;
    let mut arcs = Vec::with_capacity(d1.arc_count() * d2.arc_count());
    for (a, c) in d1.arcs() {
        for (b, d) in d2.arcs() {
            arcs.push((a * n2 + b, c * n2 + d));
        }
    }
    Digraph::from_arcs(n, &arcs)
}

/// A base digraph with a positive size for each vertex.
#[derive(Clone, Debug)]
pub struct BlowupSpec {
    pub base: Digraph,
    pub sizes: Vec<usize>,
}

impl BlowupSpec {
    pub fn new(base: Digraph, sizes: Vec<usize>) -> Result<BlowupSpec> {
        if sizes.len() != base.vertex_count() {
            return Err(Error::InvalidParameter("one size per base vertex is required".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidParameter("blowup sizes must be positive".into()));
        }
        Ok(BlowupSpec { base, sizes })
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Replaces vertex `v` by an independent set of `sizes[v]` vertices and each
/// arc `u -> v` by all arcs from the copies of `u` to the copies of `v`. A
/// loop becomes a complete bundle on its set, loops included.
pub fn blowup(bs: &BlowupSpec) -> Digraph {
    let mut start = Vec::with_capacity(bs.sizes.len());
    let mut n = 0;
    for &s in &bs.sizes {
        start.push(n);
        n += s;
    }
    let mut arcs = Vec::new();
    for (u, v) in bs.base.arcs() {
        for a in start[u]..start[u] + bs.sizes[u] {
            for b in start[v]..start[v] + bs.sizes[v] {
                arcs.push((a, b));
            }
        }
    }
    Digraph::from_arcs(n, &arcs).expect("bundles of distinct arcs are distinct")
}

/// All homomorphisms `h -> g` as vertex maps.
pub fn homomorphisms(h: &Digraph, g: &Digraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(h.vertex_count());
    extend_maps(h, g, &mut image, &mut out);
    out
}

fn extend_maps(h: &Digraph, g: &Digraph, image: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = image.len();
    if i == h.vertex_count() {
        out.push(image.clone());
        return;
    }
    for c in 0..g.vertex_count() {
        let ok_out = h.out_neighbors(i).iter().all(|&j| match j.cmp(&i) {
            std::cmp::Ordering::Less => g.has_arc(c, image[j]),
            std::cmp::Ordering::Equal => g.has_arc(c, c),
            std::cmp::Ordering::Greater => true,
        });
        let ok_in = h.in_neighbors(i).iter().all(|&j| j >= i || g.has_arc(image[j], c));
        if ok_out && ok_in {
            image.push(c);
            extend_maps(h, g, image, out);
            image.pop();
        }
    }
}

/// Isomorphism-invariant code of a digraph with at most 8 vertices: the
/// smallest adjacency bitmask over all relabelings, paired with the vertex
/// count.
pub fn canonical_code(d: &Digraph) -> Result<(usize, u64)> {
    let n = d.vertex_count();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::Budget(format!(
            "canonical labeling supports at most {MAX_CANONICAL_VERTICES} vertices, got {n}"
        )));
    }
    let arcs = d.arcs();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    permute(&mut perm, 0, &mut |p| {
        let code = arcs.iter().fold(0u64, |c, &(u, v)| c | 1 << (p[u] * 8 + p[v]));
        best = best.min(code);
    });
    Ok((n, if n == 0 { 0 } else { best }))
}

fn permute(p: &mut [usize], i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

pub fn is_isomorphic(a: &Digraph, b: &Digraph) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.arc_count() != b.arc_count() {
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

/// Limits for the probe search of [`build_recovery_system`].
#[derive(Clone, Copy, Debug)]
pub struct RecoveryBudget {
    /// Size assignments tried before giving up.
    pub attempts: usize,
}

impl Default for RecoveryBudget {
    fn default() -> Self {
        RecoveryBudget { attempts: 2000 }
    }
}

/// Patterns, coefficients, probes, and the invertible matrix
/// `M[i][j] = c_j * hom(H_j, F_i)`. Rows and columns follow the patterns
/// sorted by vertex plus arc count.
#[derive(Clone, Debug)]
pub struct RecoverySystem {
    pub patterns: Vec<Digraph>,
    pub coefficients: Vec<BigRational>,
    pub probes: Vec<BlowupSpec>,
    pub matrix: Vec<Vec<BigRational>>,
    /// `order[i]` is the caller's index of sorted pattern `i`.
    pub order: Vec<usize>,
    /// Size assignments tried, the successful one included.
    pub attempts: usize,
}

/// `hom(h, blowup(base, sizes))` from the homomorphisms into the base: each
/// homomorphism `phi` extends in `prod_u sizes[phi(u)]` ways.
pub fn hom_into_blowup(h: &Digraph, bs: &BlowupSpec) -> BigUint {
    homomorphisms(h, &bs.base)
        .iter()
        .map(|phi| phi.iter().map(|&v| BigUint::from(bs.sizes[v])).product::<BigUint>())
        .sum()
}

pub fn build_recovery_system(
    patterns: &[Digraph],
    coefficients: &[BigRational],
    seed: u64,
    budget: RecoveryBudget,
) -> Result<RecoverySystem> {
    let k = patterns.len();
    if k == 0 || coefficients.len() != k {
        return Err(Error::InvalidParameter("need one coefficient per pattern and at least one pattern".into()));
    }
    if coefficients.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("coefficients must be nonzero".into()));
    }
    let codes = patterns.iter().map(canonical_code).collect::<Result<Vec<_>>>()?;
    for i in 0..k {
        if let Some(j) = (i + 1..k).find(|&j| codes[j] == codes[i]) {
            return Err(Error::InvalidParameter(format!("patterns {i} and {j} are isomorphic")));
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| patterns[i].vertex_count() + patterns[i].arc_count());
    let patterns: Vec<Digraph> = order.iter().map(|&i| patterns[i].clone()).collect();
    let coefficients: Vec<BigRational> = order.iter().map(|&i| coefficients[i].clone()).collect();

    // hom(H_j, H_i) as explicit maps; reused for every size assignment.
    let maps: Vec<Vec<Vec<Vec<usize>>>> =
        patterns.iter().map(|hi| patterns.iter().map(|hj| homomorphisms(hj, hi)).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget.attempts {
        let sizes: Vec<Vec<usize>> = patterns
            .iter()
            .map(|h| {
                let top = 1 + attempt / 8;
                (0..h.vertex_count()).map(|_| if attempt == 0 { 1 } else { rng.gen_range(1..=top + 1) }).collect()
            })
            .collect();
        let homs: Vec<Vec<BigInt>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        maps[i][j]
                            .iter()
                            .map(|phi| phi.iter().map(|&v| BigInt::from(sizes[i][v])).product::<BigInt>())
                            .sum()
                    })
                    .collect()
            })
            .collect();
        if determinant(&homs).is_zero() {
            continue;
        }
        let matrix = homs
            .iter()
            .map(|row| row.iter().zip(&coefficients).map(|(h, c)| c * BigRational::from_integer(h.clone())).collect())
            .collect();
        let probes = patterns
            .iter()
            .zip(sizes)
            .map(|(h, s)| BlowupSpec::new(h.clone(), s))
            .collect::<Result<_>>()?;
        return Ok(RecoverySystem { patterns, coefficients, probes, matrix, order, attempts: attempt + 1 });
    }
    Err(Error::Budget(format!("no invertible probe system found in {} attempts", budget.attempts)))
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let v = &a[col][col] * &a[r][c] - &a[r][col] * &a[col][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `M x = b` exactly; `None` when `M` is singular.
pub fn solve_rational(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().zip(b).map(|(row, v)| row.iter().cloned().chain([v.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].recip();
        for c in col..=n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Recovers `hom(H_j, g)` for every pattern from `oracle`, which must
/// return `sum_j c_j hom(H_j, .)` exactly. Results follow the caller's
/// pattern order.
pub fn decompose_linear_combination<F>(sys: &RecoverySystem, oracle: F, g: &Digraph) -> Result<Vec<Natural>>
where
    F: Fn(&Digraph) -> Result<BigRational>,
{
    let b = sys
        .probes
        .iter()
        .map(|probe| oracle(&tensor_product(&blowup(probe), g)?))
        .collect::<Result<Vec<_>>>()?;
    let x = solve_rational(&sys.matrix, &b)
        .ok_or_else(|| Error::Inconsistent("recovery matrix is singular".into()))?;
    let mut out = vec![Natural::ZERO; x.len()];
    for (i, v) in x.into_iter().enumerate() {
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Inconsistent(format!("recovered count {v} is not a natural number")));
        }
        let n = v.to_integer().to_biguint().expect("checked non-negative");
        out[sys.order[i]] = Natural::from(n);
    }
    Ok(out)
}

/// Convenience for integer coefficient lists.
pub fn integer_coefficients(c: &[i64]) -> Vec<BigRational> {
    c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()
}

/// `v` as `f64` for reporting; lossy for huge values.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN)
}
