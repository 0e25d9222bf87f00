//! Cycle homomorphism counts in degenerate graphs.
//!
//! Orienting a graph along a degeneracy ordering turns every closed walk of
//! length `l` into a homomorphic image of an acyclic orientation of the
//! `l`-cycle. An acyclic orientation with `p` sources is a subdivision of the
//! alternating cycle with `p` sources, so
//!
//! ```text
//! hom(C_l, G) = sum_p (l / p) * S_p
//! ```
//!
//! where `S_p` sums, over all compositions `(x_1, ..., x_2p)` of `l`, the
//! homomorphisms of the corresponding subdivision. The factor `l / p` counts
//! (start position, composition) pairs per (orientation, marked source)
//! pair. `S_p` is the coefficient of `z^l` in the alternating-cycle count
//! over walk-length polynomials; `S_1` is a sum of two-path counts.
//!
//! Directed graphs work the same way with two DAGs: arcs going forward in
//! the ordering, and backward arcs reversed. Closed directed walks then
//! alternate between forward runs (right weights) and backward runs (left
//! weights).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::comb::{hom_alt_cycle_comb_counted, hom_two_paths};
use crate::error::{Error, Result};
use crate::graph::{
    degeneracy_ordering, orient_acyclic, split_by_ordering, DegeneracyOrdering, Digraph, Graph,
};
use crate::matmul::{comb_exponent, cost_model_ck_with_budget, hom_alt_cycle_matmul_with, CostParams, PlanStrategy};
use crate::ops::OpCounter;
use crate::ring::Natural;
use crate::walk::{Aggregate, ShiftedPolynomial, WalkCounts, WeightedDigraph};

/// Engine used for the alternating-cycle counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Comb,
    Matmul,
    /// Matmul when its cost-model exponent beats the combinatorial one.
    Auto,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "comb" => Ok(Engine::Comb),
            "matmul" => Ok(Engine::Matmul),
            "auto" => Ok(Engine::Auto),
            other => Err(Error::Usage(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HomOptions {
    pub engine: Engine,
    pub cost: CostParams,
}

impl HomOptions {
    pub fn with_engine(engine: Engine) -> HomOptions {
        HomOptions { engine, ..HomOptions::default() }
    }
}

/// `hom(C_l, g)`: closed walks of length `l` (directed walks when `g` is
/// directed).
pub fn hom_cycle_degenerate(g: &Graph, l: usize, engine: Engine) -> Result<Natural> {
    hom_cycle_degenerate_with(g, l, &HomOptions::with_engine(engine), &OpCounter::new())
}

pub fn hom_cycle_degenerate_with(g: &Graph, l: usize, opts: &HomOptions, ops: &OpCounter) -> Result<Natural> {
    let base = g.underlying_undirected();
    let ord = degeneracy_ordering(&base)?;
    hom_cycle_with_ordering(g, &ord, l, opts, ops)
}

/// As [`hom_cycle_degenerate_with`], orienting along a caller-supplied
/// ordering. The count does not depend on the ordering; only the running
/// time does.
pub fn hom_cycle_with_ordering(
    g: &Graph,
    ord: &DegeneracyOrdering,
    l: usize,
    opts: &HomOptions,
    ops: &OpCounter,
) -> Result<Natural> {
    if g.is_directed() {
        let (fwd, bwd) = split_by_ordering(g, ord)?;
        hom_cycle_typed(&fwd, Some(&bwd), l, opts, ops)
    } else {
        let d = orient_acyclic(g, ord)?;
        hom_cycle_typed(&d, None, l, opts, ops)
    }
}

/// Sum over all acyclic orientations `O` of the labeled `l`-cycle of
/// `hom(O, d)`. For an orientation of an undirected graph this equals
/// `hom(C_l, g)`.
pub fn hom_cycle_dag(d: &Digraph, l: usize, engine: Engine) -> Result<Natural> {
    hom_cycle_typed(d, None, l, &HomOptions::with_engine(engine), &OpCounter::new())
}

/// Combines [`composition_sums`] into the cycle count.
pub fn hom_cycle_typed(
    right: &Digraph,
    left: Option<&Digraph>,
    l: usize,
    opts: &HomOptions,
    ops: &OpCounter,
) -> Result<Natural> {
    let sums = composition_sums(right, left, l, opts, ops)?;
    let mut total = Natural::ZERO;
    for (p, s) in sums {
        let term = s
            .mul_u64(l as u64)
            .div_exact(p as u64)
            .ok_or_else(|| Error::Inconsistent(format!("{l} * S_{p} is not divisible by {p}")))?;
        total += &term;
    }
    Ok(total)
}

/// `(p, S_p)` for `p = 1 ..= l / 2`: `S_p` sums homomorphism counts of every
/// subdivision of the alternating cycle with `p` sources into `l` arcs.
///
/// Arcs leaving a source towards the next sink use walks of `right`; arcs
/// towards the previous sink use walks of `left` (default `right`).
pub fn composition_sums(
    right: &Digraph,
    left: Option<&Digraph>,
    l: usize,
    opts: &HomOptions,
    ops: &OpCounter,
) -> Result<Vec<(usize, Natural)>> {
    if l < 3 {
        return Err(Error::InvalidParameter(format!("cycle length must be at least 3, got {l}")));
    }
    if let Some(lt) = left {
        if lt.vertex_count() != right.vertex_count() {
            return Err(Error::InvalidParameter("typed DAGs differ in vertex count".into()));
        }
    }
    let rw = Arc::new(WalkCounts::compute(right, l - 1)?);
    let lw = left.map(|d| WalkCounts::compute(d, l - 1).map(Arc::new)).transpose()?;

    let mut out = Vec::with_capacity(l / 2);
    let two = WeightedDigraph::from_walks(rw.clone(), lw.clone(), l - 1, &Aggregate);
    let mut s1 = Natural::ZERO;
    for x1 in 1..l {
        s1 += &hom_two_paths(&two, x1, l - x1)?;
    }
    out.push((1, s1));

    for p in 2..=l / 2 {
        let cap = l - 2 * p;
        let f = WeightedDigraph::from_walks(rw.clone(), lw.clone(), cap + 1, &ShiftedPolynomial { cap });
        let poly = match resolve(opts, p) {
            Engine::Matmul => hom_alt_cycle_matmul_with(&f, p, &opts.cost, PlanStrategy::Optimal, ops)?,
            _ => hom_alt_cycle_comb_counted(&f, p, ops)?,
        };
        out.push((p, poly.coeff(cap)));
    }
    Ok(out)
}

/// The engine actually used for `p` sources.
pub fn resolve(opts: &HomOptions, p: usize) -> Engine {
    match opts.engine {
        Engine::Auto => {
            if matmul_exponent(p, opts.cost.omega) < comb_exponent(p) - 1e-9 {
                Engine::Matmul
            } else {
                Engine::Comb
            }
        }
        e => e,
    }
}

/// `c_p` at the finest of a few grid steps that fits a small budget; cached.
fn matmul_exponent(p: usize, omega: f64) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().expect("cache lock").get(&(p, omega.to_bits())) {
        return v;
    }
    let v = [0.01, 0.02, 0.05, 0.1, 0.25, 0.5]
        .iter()
        .find_map(|&step| {
            let cp = CostParams { omega, grid_step: step };
            cost_model_ck_with_budget(p, &cp, 2_000_000).ok().map(|r| r.value)
        })
        .unwrap_or(f64::INFINITY);
    cache.lock().expect("cache lock").insert((p, omega.to_bits()), v);
    v
}

/// `S_1` by direct expansion from every source: walks of each length from
/// `u` in both DAGs, paired at every common endpoint.
pub fn single_source_count(right: &Digraph, left: Option<&Digraph>, l: usize) -> Natural {
    let left = left.unwrap_or(right);
    let n = right.vertex_count();
    let layers = |d: &Digraph, u: usize| {
        let mut rows = vec![vec![Natural::ZERO; n]; l];
        rows[0][u] = Natural::ONE;
        for len in 1..l {
            for v in 0..n {
                if rows[len - 1][v].is_zero() {
                    continue;
                }
                let c = rows[len - 1][v].clone();
                for &w in d.out_neighbors(v) {
                    rows[len][w] += &c;
                }
            }
        }
        rows
    };
    let mut total = Natural::ZERO;
    for u in 0..n {
        let a = layers(right, u);
        let b = layers(left, u);
        for v in 0..n {
            for x1 in 1..l {
                total.add_mul(&a[x1][v], &b[l - x1][v]);
            }
        }
    }
    total
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
        for engine in [Engine::Comb, Engine::Matmul, Engine::Auto] {
            assert_eq!(hom_cycle_degenerate(&named::complete(3), 6, engine).unwrap(), n(66));
            assert_eq!(hom_cycle_degenerate(&named::cycle(6), 6, engine).unwrap(), n(132));
            assert_eq!(hom_cycle_degenerate(&named::complete(3), 3, engine).unwrap(), n(6));
            assert_eq!(hom_cycle_degenerate(&Graph::empty(5, false), 7, engine).unwrap(), n(0));
        }
    }

    #[test]
    fn directed_cycles() {
        let c3 = named::directed_cycle(3);
        assert_eq!(hom_cycle_degenerate(&c3, 3, Engine::Comb).unwrap(), n(3));
        assert_eq!(hom_cycle_degenerate(&c3, 6, Engine::Matmul).unwrap(), n(3));
        assert_eq!(hom_cycle_degenerate(&c3, 4, Engine::Comb).unwrap(), n(0));
    }

    #[test]
    fn short_cycles_rejected() {
        assert!(hom_cycle_degenerate(&named::complete(3), 2, Engine::Comb).is_err());
    }

    #[test]
    fn direct_expansion_matches_two_paths() {
        let g = named::complete(5);
        let d = orient_acyclic(&g, &degeneracy_ordering(&g).unwrap()).unwrap();
        for l in 3..8 {
            let sums = composition_sums(&d, None, l, &HomOptions::default(), &OpCounter::new()).unwrap();
            assert_eq!(sums[0].1, single_source_count(&d, None, l));
        }
    }
}
