//! Linear programs over adjusted opinions with a fixed ordering.
//!
//! The absolute-value cost `Σ c_k |x_k − o_k|` is linearized by writing
//! `x_k = o_k + p_k − q_k` with `p_k ∈ [0, 1 − o_k]`, `q_k ∈ [0, o_k]` and
//! charging `c_k (p_k + q_k)`. Constraints are stated on `x` in rank order
//! and translated onto the split variables.

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus, Relation};

pub(crate) struct SplitLp {
    /// `order[k]` is the original index of the opinion placed at rank `k`.
    order: Vec<usize>,
    base: Vec<f64>,
    problem: LpProblem,
}

pub(crate) struct SplitSolution {
    /// Adjusted opinions in the original index order.
    pub x: Vec<f64>,
    pub iterations: usize,
}

impl SplitLp {
    /// `extra` lists bounds of auxiliary columns placed after the split
    /// variables; they carry no cost.
    pub fn new(o: &[f64], c: &[f64], order: Vec<usize>, extra: &[(f64, f64)]) -> Result<Self> {
        let n = order.len();
        let base: Vec<f64> = order.iter().map(|&i| o[i]).collect();
        let mut objective = Vec::with_capacity(2 * n + extra.len());
        let mut lower = Vec::with_capacity(objective.capacity());
        let mut upper = Vec::with_capacity(objective.capacity());
        for &i in &order {
            objective.push(c[i]);
            lower.push(0.0);
            upper.push(1.0 - o[i]);
        }
        for &i in &order {
            objective.push(c[i]);
            lower.push(0.0);
            upper.push(o[i]);
        }
        for &(l, u) in extra {
            objective.push(0.0);
            lower.push(l);
            upper.push(u);
        }
        Ok(SplitLp {
            order,
            base,
            problem: LpProblem::new(objective, lower, upper)?,
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn extra_col(&self, i: usize) -> usize {
        2 * self.n() + i
    }

    /// Adds `Σ a_k x_(k) + Σ e_i extra_i  rel  rhs` with `x_(k)` the opinion at
    /// rank `k`.
    pub fn add(
        &mut self,
        x_terms: &[(usize, f64)],
        extra_terms: &[(usize, f64)],
        relation: Relation,
        rhs: f64,
    ) -> Result<()> {
        let n = self.n();
        let mut terms = Vec::with_capacity(2 * x_terms.len() + extra_terms.len());
        let mut shift = 0.0;
        for &(k, a) in x_terms {
            terms.push((k, a));
            terms.push((n + k, -a));
            shift += a * self.base[k];
        }
        for &(i, a) in extra_terms {
            terms.push((self.extra_col(i), a));
        }
        self.problem.add_sparse(&terms, relation, rhs - shift)
    }

    /// `x_(1) ≥ x_(2) ≥ … ≥ x_(n)`.
    pub fn add_ordering(&mut self) -> Result<()> {
        for k in 0..self.n().saturating_sub(1) {
            self.add(&[(k, 1.0), (k + 1, -1.0)], &[], Relation::Ge, 0.0)?;
        }
        Ok(())
    }

    /// `None` when the constraints admit no point.
    pub fn solve(&self) -> Result<Option<SplitSolution>> {
        let sol = solve_lp(&self.problem)?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => {
                return Err(Error::SolverFailure(
                    "bounded opinion model reported unbounded".into(),
                ))
            }
        }
        let v = sol.x.expect("optimal solution carries a point");
        let n = self.n();
        let mut x = vec![0.0; n];
        for k in 0..n {
            x[self.order[k]] = (self.base[k] + v[k] - v[n + k]).clamp(0.0, 1.0);
        }
        Ok(Some(SplitSolution {
            x,
            iterations: sol.iterations,
        }))
    }
}

/// Indices of `values` sorted by decreasing value; ties keep index order.
pub(crate) fn decreasing_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}
