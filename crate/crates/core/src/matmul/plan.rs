//! Matrix-chain planning under a rectangular-multiplication cost model.
//!
//! For a cyclic chain of `k` sparse factors with degree exponents
//! `d_0, ..., d_{k-1}`, `P(i, j)` is the predicted exponent of computing the
//! product of the factors from position `i` to position `j` (cyclically).
//! Exponents are model quantities, so they are plain `f64`.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Longest chain the planner accepts.
pub const MAX_CHAIN: usize = 16;

/// Cost-model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostParams {
    /// Matrix multiplication exponent, in `[2, 3]`.
    pub omega: f64,
    /// Grid resolution for [`cost_model_ck`].
    pub grid_step: f64,
}

impl Default for CostParams {
    /// Classical multiplication, matching what the executor actually runs.
    fn default() -> Self {
        CostParams { omega: 3.0, grid_step: 0.01 }
    }
}

impl CostParams {
    pub fn new(omega: f64, grid_step: f64) -> Result<CostParams> {
        if !(2.0..=3.0).contains(&omega) {
            return Err(Error::InvalidParameter(format!("omega must lie in [2, 3], got {omega}")));
        }
        if !(grid_step > 0.0 && grid_step <= 1.0) {
            return Err(Error::InvalidParameter(format!("grid step must lie in (0, 1], got {grid_step}")));
        }
        Ok(CostParams { omega, grid_step })
    }

    /// Exponent of multiplying an `n^a x n^b` matrix by an `n^b x n^c` one.
    #[inline]
    pub fn mult_exponent(&self, a: f64, b: f64, c: f64) -> f64 {
        a + b + c - (3.0 - self.omega) * a.min(b).min(c)
    }
}

/// How the product over one interval of the chain is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    /// A single factor.
    Base,
    /// Extend the product one factor to the right by neighbor traversal.
    ExtendRight,
    /// Extend the product one factor to the left by neighbor traversal.
    ExtendLeft,
    /// Multiply the products over the first `t` factors and the rest densely.
    Split(usize),
}

/// Which evaluation order to record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PlanStrategy {
    /// The order minimizing the predicted exponent.
    #[default]
    Optimal,
    /// Always extend to the right.
    ExtendRightOnly,
    /// Always extend to the left.
    ExtendLeftOnly,
    /// Always split in the middle.
    SplitMiddle,
}

/// Evaluation tree for every cyclic interval plus the closing pair.
#[derive(Clone, Debug)]
pub struct EvaluationPlan {
    k: usize,
    d: Vec<f64>,
    cost: Vec<f64>,
    choice: Vec<Choice>,
    /// The trace is taken of `B(i, j) * B(j, i)` for this `(i, j)`.
    pub closing: (usize, usize),
    /// `max(P(i, j), P(j, i))` at the closing pair.
    pub objective: f64,
}

impl EvaluationPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn exponents(&self) -> &[f64] {
        &self.d
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let len = (j + self.k - i) % self.k;
        assert!(len > 0, "interval from {i} to {j} is empty");
        i * self.k + len
    }

    /// Predicted exponent `P(i, j)` of the product from `i` to `j`.
    pub fn predicted(&self, i: usize, j: usize) -> f64 {
        self.cost[self.slot(i, j)]
    }

    pub fn choice(&self, i: usize, j: usize) -> Choice {
        self.choice[self.slot(i, j)]
    }
}

fn check(d: &[f64], k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("chain length must be at least 2, got {k}")));
    }
    if k > MAX_CHAIN {
        return Err(Error::InvalidParameter(format!("chain length at most {MAX_CHAIN}, got {k}")));
    }
    if d.len() != k {
        return Err(Error::InvalidParameter(format!("{} exponents for a chain of {k}", d.len())));
    }
    if d.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidParameter("exponents must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Plans the cyclic chain with the optimal evaluation order.
pub fn plan_matrix_chain(d: &[f64], k: usize, cp: &CostParams) -> Result<EvaluationPlan> {
    plan_with_strategy(d, k, cp, PlanStrategy::Optimal)
}

pub fn plan_with_strategy(
    d: &[f64],
    k: usize,
    cp: &CostParams,
    strategy: PlanStrategy,
) -> Result<EvaluationPlan> {
    check(d, k)?;
    let mut cost = vec![f64::NAN; k * k];
    let mut choice = vec![Choice::Base; k * k];
    let at = |s: usize| d[s % k];
    for len in 1..k {
        for s in 0..k {
            let idx = s * k + len;
            if len == 1 {
                cost[idx] = 1.0;
                continue;
            }
            let right = cost[s * k + len - 1] + at(s + len - 1);
            let left = cost[((s + 1) % k) * k + len - 1] + at(s + 1);
            let split = |t: usize| {
                let a = cost[s * k + t];
                let b = cost[((s + t) % k) * k + len - t];
                let m = cp.mult_exponent(1.0 - at(s), 1.0 - at(s + t), 1.0 - at(s + len));
                a.max(b).max(m)
            };
            let (c, ch) = match strategy {
                PlanStrategy::ExtendRightOnly => (right, Choice::ExtendRight),
                PlanStrategy::ExtendLeftOnly => (left, Choice::ExtendLeft),
                PlanStrategy::SplitMiddle => (split(len / 2), Choice::Split(len / 2)),
                PlanStrategy::Optimal => {
                    let mut best = (right, Choice::ExtendRight);
                    if left < best.0 {
                        best = (left, Choice::ExtendLeft);
                    }
                    for t in 1..len {
                        let v = split(t);
                        if v < best.0 {
                            best = (v, Choice::Split(t));
                        }
                    }
                    best
                }
            };
            cost[idx] = c;
            choice[idx] = ch;
        }
    }
    let mut closing = (0, 1);
    let mut objective = f64::INFINITY;
    for i in 0..k {
        for j in i + 1..k {
            let v = cost[i * k + (j - i)].max(cost[j * k + (k - (j - i))]);
            if v < objective {
                objective = v;
                closing = (i, j);
            }
        }
    }
    if strategy != PlanStrategy::Optimal {
        closing = (0, k / 2);
        objective = cost[k / 2].max(cost[(k / 2) * k + (k - k / 2)]);
    }
    Ok(EvaluationPlan { k, d: d.to_vec(), cost, choice, closing, objective })
}

/// `C_k(d)`: the optimal closing objective, computed without allocation.
pub fn chain_objective(d: &[f64], cp: &CostParams) -> f64 {
    let k = d.len();
    let mut cost = [[0.0f64; MAX_CHAIN]; MAX_CHAIN];
    for len in 1..k {
        for s in 0..k {
            if len == 1 {
                cost[s][1] = 1.0;
                continue;
            }
            let at = |i: usize| d[i % k];
            let mut best = (cost[s][len - 1] + at(s + len - 1)).min(cost[(s + 1) % k][len - 1] + at(s + 1));
            let (a0, c0) = (1.0 - at(s), 1.0 - at(s + len));
            for t in 1..len {
                let v = cost[s][t]
                    .max(cost[(s + t) % k][len - t])
                    .max(cp.mult_exponent(a0, 1.0 - at(s + t), c0));
                best = best.min(v);
            }
            cost[s][len] = best;
        }
    }
    let mut obj = f64::INFINITY;
    for i in 0..k {
        for j in i + 1..k {
            obj = obj.min(cost[i][j - i].max(cost[j][k - (j - i)]));
        }
    }
    obj
}

/// Maximum of [`chain_objective`] over a grid, with its maximizer.
#[derive(Clone, Debug)]
pub struct CostModelValue {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Grid points evaluated.
    pub points: u64,
}

/// Default cap on evaluated grid points.
pub const DEFAULT_GRID_BUDGET: u64 = 60_000_000;

/// Maximizes `C_k(d)` over `d` in `{0, step, ..., 1}^k`.
pub fn cost_model_ck(k: usize, cp: &CostParams) -> Result<CostModelValue> {
    cost_model_ck_with_budget(k, cp, DEFAULT_GRID_BUDGET)
}

/// [`cost_model_ck`] with an explicit cap on evaluated grid points.
///
/// The objective is invariant under rotating `d`, so only tuples whose first
/// entry is a maximum are evaluated.
pub fn cost_model_ck_with_budget(k: usize, cp: &CostParams, budget: u64) -> Result<CostModelValue> {
    check(&vec![0.0; k], k)?;
    let raw = 1.0 / cp.grid_step;
    let steps = raw.round() as u64;
    if steps == 0 || (raw - steps as f64).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "grid step {} does not divide 1",
            cp.grid_step
        )));
    }
    let points: u64 = (0..=steps)
        .map(|a| (a + 1).checked_pow(k as u32 - 1).unwrap_or(u64::MAX))
        .fold(0u64, |s, x| s.saturating_add(x));
    if points > budget {
        return Err(Error::Budget(format!(
            "grid with step {} needs {points} evaluations for k = {k}, budget is {budget}",
            cp.grid_step
        )));
    }
    let best = (0..=steps)
        .into_par_iter()
        .map(|top| {
            let mut idx = vec![0u64; k];
            idx[0] = top;
            let mut d = vec![0.0; k];
            d[0] = top as f64 / steps as f64;
            let mut best = (f64::NEG_INFINITY, d.clone());
            loop {
                for i in 1..k {
                    d[i] = idx[i] as f64 / steps as f64;
                }
                let v = chain_objective(&d, cp);
                if v > best.0 + 1e-12 {
                    best = (v, d.clone());
                }
                let mut pos = k - 1;
                loop {
                    if pos == 0 {
                        return best;
                    }
                    if idx[pos] < top {
                        idx[pos] += 1;
                        break;
                    }
                    idx[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .reduce(
            || (f64::NEG_INFINITY, Vec::new()),
            |a, b| if b.0 > a.0 + 1e-12 || (a.1.is_empty() && !b.1.is_empty()) { b } else { a },
        );
    Ok(CostModelValue { value: best.0, argmax: best.1, points })
}

/// Exponent of the combinatorial engine on the alternating cycle with `k`
/// sources.
pub fn comb_exponent(k: usize) -> f64 {
    2.0 - 1.0 / k.div_ceil(2) as f64
}

/// `min(c_k, 2 - 1/ceil(k/2))`: the better of the two engines' exponents.
pub fn dk(k: usize, cp: &CostParams) -> Result<f64> {
    Ok(cost_model_ck(k, cp)?.value.min(comb_exponent(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(omega: f64) -> CostParams {
        CostParams::new(omega, 0.05).unwrap()
    }

    #[test]
    fn flat_exponents_cost_one() {
        for omega in [2.0, 2.5, 3.0] {
            let p = plan_matrix_chain(&[0.0; 3], 3, &cp(omega)).unwrap();
            assert_eq!(p.objective, 1.0);
        }
    }

    #[test]
    fn full_exponents_split_at_omega_two() {
        let p = plan_matrix_chain(&[1.0; 3], 3, &cp(2.0)).unwrap();
        assert_eq!(p.objective, 1.0);
        assert!(matches!(p.choice(0, 2), Choice::Split(1)));
    }

    #[test]
    fn adjacent_intervals_are_linear() {
        let d = [0.3, 0.9, 0.1, 0.5, 0.7];
        let p = plan_matrix_chain(&d, 5, &cp(2.4)).unwrap();
        for i in 0..5 {
            assert_eq!(p.predicted(i, (i + 1) % 5), 1.0);
            assert_eq!(p.choice(i, (i + 1) % 5), Choice::Base);
        }
        assert!((chain_objective(&d, &cp(2.4)) - p.objective).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(plan_matrix_chain(&[0.0], 1, &cp(3.0)).is_err());
        assert!(plan_matrix_chain(&[0.0, 1.5], 2, &cp(3.0)).is_err());
        assert!(CostParams::new(1.5, 0.1).is_err());
        assert!(cost_model_ck(3, &CostParams::new(2.0, 0.03).unwrap()).is_err());
        let fine = CostParams::new(2.0, 0.01).unwrap();
        assert!(matches!(cost_model_ck(5, &fine), Err(Error::Budget(_))));
    }

    #[test]
    fn coarse_cost_model_values() {
        let c3 = cost_model_ck(3, &cp(2.0)).unwrap();
        assert!((c3.value - 4.0 / 3.0).abs() <= 0.05, "{c3:?}");
        assert!((chain_objective(&c3.argmax, &cp(2.0)) - c3.value).abs() < 1e-12);
        let c3w3 = cost_model_ck(3, &cp(3.0)).unwrap();
        assert!((c3w3.value - 1.5).abs() <= 0.05, "{c3w3:?}");
        assert!((dk(3, &cp(3.0)).unwrap() - 1.5).abs() <= 0.05);
    }
}
