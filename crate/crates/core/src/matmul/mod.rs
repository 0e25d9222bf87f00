//! Matrix-chain engine: the alternating-cycle count as a sum of traces of
//! cherry-matrix chains, split by in-degree class.
//!
//! The cherry matrix `H[x, y] = sum_z left(z, x) * right(z, y)` turns the
//! alternating cycle with `k` sources into `trace(H^k)`. Sinks are bucketed
//! by `floor(log2(in-degree))`; every tuple of classes contributes the trace
//! of one chain of class-restricted blocks, evaluated in the order chosen by
//! [`plan`].

pub mod plan;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::comb::{cherry, pack, unpack, Hand};
use crate::error::{Error, Result};
use crate::ops::OpCounter;
use crate::ring::RingWeight;
use crate::walk::WeightedDigraph;

pub use plan::{
    chain_objective, comb_exponent, cost_model_ck, cost_model_ck_with_budget, dk, plan_matrix_chain,
    plan_with_strategy, Choice, CostModelValue, CostParams, EvaluationPlan, PlanStrategy, DEFAULT_GRID_BUDGET, MAX_CHAIN,
};

type Map<W> = FxHashMap<u64, W>;

/// Sparse `H[x, y]` over ordered sink pairs, including `x == y`.
#[derive(Clone, Debug)]
pub struct CherryTable<W> {
    entries: Map<W>,
}

impl<W: RingWeight> CherryTable<W> {
    pub fn get(&self, x: usize, y: usize) -> Option<&W> {
        self.entries.get(&pack(x, y))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One pass over every vertex and pair of its out-arcs.
pub fn build_cherry_table<W: RingWeight>(w: &WeightedDigraph<W>) -> CherryTable<W> {
    CherryTable { entries: cherry(w, Hand::Forward, &OpCounter::new()) }
}

/// In-degree class of every vertex: `floor(log2(in-degree))`, `None` for
/// sources.
pub fn degree_classes<W: RingWeight>(w: &WeightedDigraph<W>) -> Vec<Option<usize>> {
    (0..w.vertex_count())
        .map(|v| match w.in_degree(v) {
            0 => None,
            d => Some(d.ilog2() as usize),
        })
        .collect()
}

struct Context<'a, W> {
    w: &'a WeightedDigraph<W>,
    class: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    local: Vec<usize>,
    blocks: FxHashMap<(usize, usize), Map<W>>,
    log_n: f64,
}

/// `trace(H^k)`, the weighted count of the alternating cycle with `k`
/// sources, using optimal plans.
pub fn hom_alt_cycle_matmul<W: RingWeight>(w: &WeightedDigraph<W>, k: usize, cp: &CostParams) -> Result<W> {
    hom_alt_cycle_matmul_with(w, k, cp, PlanStrategy::Optimal, &OpCounter::new())
}

/// [`hom_alt_cycle_matmul`] with a chosen plan strategy and op counting.
pub fn hom_alt_cycle_matmul_with<W: RingWeight>(
    w: &WeightedDigraph<W>,
    k: usize,
    cp: &CostParams,
    strategy: PlanStrategy,
    ops: &OpCounter,
) -> Result<W> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("alternating cycle needs at least 2 sources, got {k}")));
    }
    if k > plan::MAX_CHAIN {
        return Err(Error::InvalidParameter(format!("at most {} sources are supported", plan::MAX_CHAIN)));
    }
    let n = w.vertex_count();
    let class = degree_classes(w);
    let class_count = class.iter().flatten().max().map_or(0, |c| c + 1);
    let mut members = vec![Vec::new(); class_count];
    let mut local = vec![usize::MAX; n];
    for v in 0..n {
        if let Some(c) = class[v] {
            local[v] = members[c].len();
            members[c].push(v);
        }
    }
    let mut blocks: FxHashMap<(usize, usize), Map<W>> = FxHashMap::default();
    for (k2, val) in cherry(w, Hand::Forward, ops) {
        let (x, y) = unpack(k2);
        let (cx, cy) = (class[x].expect("sink"), class[y].expect("sink"));
        blocks.entry((cx, cy)).or_default().insert(k2, val);
    }
    let ctx = Context { w, class, members, local, blocks, log_n: (n.max(2) as f64).log2() };

    let mut tuples = Vec::new();
    let mut cur = Vec::with_capacity(k);
    enumerate_tuples(&ctx, k, class_count, &mut cur, &mut tuples);

    let total = tuples
        .par_iter()
        .map(|f| evaluate_tuple(&ctx, f, cp, strategy, ops))
        .collect::<Result<Vec<W>>>()?
        .into_iter()
        .fold(W::zero(), |mut acc, v| {
            acc.add_assign(&v);
            acc
        });
    Ok(total)
}

/// Class tuples whose consecutive blocks (cyclically) are all nonempty.
fn enumerate_tuples<W>(
    ctx: &Context<'_, W>,
    k: usize,
    classes: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == k {
        if ctx.blocks.contains_key(&(cur[k - 1], cur[0])) {
            out.push(cur.clone());
        }
        return;
    }
    for c in 0..classes {
        if ctx.members[c].is_empty() {
            continue;
        }
        if let Some(&prev) = cur.last() {
            if !ctx.blocks.contains_key(&(prev, c)) {
                continue;
            }
        }
        cur.push(c);
        enumerate_tuples(ctx, k, classes, cur, out);
        cur.pop();
    }
}

fn evaluate_tuple<W: RingWeight>(
    ctx: &Context<'_, W>,
    f: &[usize],
    cp: &CostParams,
    strategy: PlanStrategy,
    ops: &OpCounter,
) -> Result<W> {
    let k = f.len();
    let d: Vec<f64> = f.iter().map(|&c| (c as f64 / ctx.log_n).min(1.0)).collect();
    let plan = plan_with_strategy(&d, k, cp, strategy)?;
    let (i, j) = plan.closing;
    let mut memo: Vec<Option<Map<W>>> = vec![None; k * k];
    let mut count = 0u64;
    compute(ctx, f, &plan, i, j - i, &mut memo, &mut count);
    compute(ctx, f, &plan, j, k - (j - i), &mut memo, &mut count);
    let x = memo[i * k + (j - i)].as_ref().expect("computed");
    let y = memo[j * k + (k - (j - i))].as_ref().expect("computed");
    let (small, large, swap) = if x.len() <= y.len() { (x, y, false) } else { (y, x, true) };
    let mut acc = W::zero();
    for (&key, a) in small {
        let (r, c) = unpack(key);
        count += 1;
        if let Some(b) = large.get(&pack(c, r)) {
            if swap {
                acc.add_mul(b, a);
            } else {
                acc.add_mul(a, b);
            }
        }
    }
    ops.add(count);
    Ok(acc)
}

/// Fills `memo[s * k + len]` with the product of factors `s .. s + len`.
fn compute<W: RingWeight>(
    ctx: &Context<'_, W>,
    f: &[usize],
    plan: &EvaluationPlan,
    s: usize,
    len: usize,
    memo: &mut Vec<Option<Map<W>>>,
    ops: &mut u64,
) {
    let k = f.len();
    let idx = s * k + len;
    if memo[idx].is_some() {
        return;
    }
    let at = |i: usize| f[i % k];
    let w = ctx.w;
    let result = match plan.choice(s, (s + len) % k) {
        Choice::Base => ctx.blocks.get(&(at(s), at(s + 1))).cloned().unwrap_or_default(),
        Choice::ExtendRight => {
            compute(ctx, f, plan, s, len - 1, memo, ops);
            let prev = memo[s * k + len - 1].as_ref().expect("computed");
            let target = at(s + len);
            let mut out = Map::default();
            for (&key, b) in prev {
                let (x, y) = unpack(key);
                for (u, arc) in w.in_arcs(y) {
                    *ops += 1;
                    if arc.left.is_zero() {
                        continue;
                    }
                    let a = b.mul(&arc.left);
                    for nxt in w.out_arcs(u) {
                        if ctx.class[nxt.head] == Some(target) && !nxt.right.is_zero() {
                            out.entry(pack(x, nxt.head)).or_insert_with(W::zero).add_mul(&a, &nxt.right);
                            *ops += 1;
                        }
                    }
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        }
        Choice::ExtendLeft => {
            compute(ctx, f, plan, (s + 1) % k, len - 1, memo, ops);
            let prev = memo[((s + 1) % k) * k + len - 1].as_ref().expect("computed");
            let target = at(s);
            let mut out = Map::default();
            for (&key, b) in prev {
                let (y, z) = unpack(key);
                for (u, arc) in w.in_arcs(y) {
                    *ops += 1;
                    if arc.right.is_zero() {
                        continue;
                    }
                    let a = arc.right.mul(b);
                    for prv in w.out_arcs(u) {
                        if ctx.class[prv.head] == Some(target) && !prv.left.is_zero() {
                            out.entry(pack(prv.head, z)).or_insert_with(W::zero).add_mul(&prv.left, &a);
                            *ops += 1;
                        }
                    }
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        }
        Choice::Split(t) => {
            compute(ctx, f, plan, s, t, memo, ops);
            compute(ctx, f, plan, (s + t) % k, len - t, memo, ops);
            let a = memo[s * k + t].as_ref().expect("computed");
            let b = memo[((s + t) % k) * k + len - t].as_ref().expect("computed");
            dense_product(ctx, a, b, at(s), at(s + t), at(s + len), ops)
        }
    };
    memo[idx] = Some(result);
}

/// Classical dense product of two class-restricted blocks.
fn dense_product<W: RingWeight>(
    ctx: &Context<'_, W>,
    a: &Map<W>,
    b: &Map<W>,
    rows: usize,
    mid: usize,
    cols: usize,
    ops: &mut u64,
) -> Map<W> {
    let (nr, nm, nc) = (ctx.members[rows].len(), ctx.members[mid].len(), ctx.members[cols].len());
    let mut da = vec![W::zero(); nr * nm];
    for (&key, v) in a {
        let (x, y) = unpack(key);
        da[ctx.local[x] * nm + ctx.local[y]] = v.clone();
    }
    let mut db = vec![W::zero(); nm * nc];
    for (&key, v) in b {
        let (x, y) = unpack(key);
        db[ctx.local[x] * nc + ctx.local[y]] = v.clone();
    }
    let mut dc = vec![W::zero(); nr * nc];
    for i in 0..nr {
        for m in 0..nm {
            let av = &da[i * nm + m];
            *ops += 1;
            if av.is_zero() {
                continue;
            }
            for j in 0..nc {
                let bv = &db[m * nc + j];
                *ops += 1;
                if !bv.is_zero() {
                    dc[i * nc + j].add_mul(av, bv);
                }
            }
        }
    }
    let mut out = Map::default();
    for i in 0..nr {
        for j in 0..nc {
            let v = std::mem::replace(&mut dc[i * nc + j], W::zero());
            if !v.is_zero() {
                out.insert(pack(ctx.members[rows][i], ctx.members[cols][j]), v);
            }
        }
    }
    out
}
