//! OWA-based minimum cost consensus.
//!
//! The feasible set `R_ε^{Ψω} = {x : max_i |x_i − Ψω(x)| ≤ ε}` is not convex
//! in general. It is sandwiched between two mutual consensus regions,
//! `R_{δ₋} ⊆ R_ε^{Ψω} ⊆ R_{δ₊}`, which gives cost bounds from two exact
//! MCMC solves and drives the interpolating approximation [`ap_owamcc`].
//! Exact answers come from [`solve_symmetric_linear`] (uniform costs) and
//! from the ordering enumeration in [`solve_exact_enum`].

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::Relation;
use crate::mcmc::{cost, solve_mcmc, solve_mcmc_with, McmcResult, TieBreak};
use crate::measures::{
    kappa_mutual, kappa_owa, membership, owa, Instance, Membership, OpinionVector,
};
use crate::split::{decreasing_order, SplitLp};

/// Largest group size accepted by [`solve_exact_enum`].
pub const MAX_ENUM_N: usize = 9;
const UNIFORM_TOL: f64 = 1e-9;
const KAPPA_TOL: f64 = 1e-12;
const DELTA_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaBounds {
    pub delta_minus: f64,
    pub delta_plus: f64,
}

/// Radii of the largest mutual consensus region inside `R_ε^{Ψω}` and the
/// smallest one containing it:
/// `δ₋ = min(ε / (1 − min(ω₁, ω_n)), 1)` and `δ₊ = min(2ε, 1)`.
pub fn delta_bounds(epsilon: f64, omega: &[f64]) -> Result<DeltaBounds> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is outside [0, 1]"
        )));
    }
    let n = omega.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "delta bounds need at least two OWA weights".into(),
        ));
    }
    let end = omega[0].min(omega[n - 1]);
    Ok(DeltaBounds {
        delta_minus: (epsilon / (1.0 - end)).min(1.0),
        delta_plus: (2.0 * epsilon).min(1.0),
    })
}

/// `[ξ(x₊), ξ(x₋)]`, the costs of the MCMC optima at `δ₊` and `δ₋`. Any
/// OWA-MCC optimum costs something in this range.
pub fn cost_bounds(instance: &Instance) -> Result<[f64; 2]> {
    let o = instance.opinions();
    if kappa_owa(instance.owa_weights(), o)? <= instance.epsilon() + KAPPA_TOL {
        return Ok([0.0, 0.0]);
    }
    let b = delta_bounds(instance.epsilon(), instance.owa_weights())?;
    let c = instance.costs();
    let lower = solve_mcmc(o, c, b.delta_plus, None)?.cost;
    let upper = solve_mcmc(o, c, b.delta_minus, None)?.cost;
    Ok([lower, upper])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxOptions {
    pub max_iters: usize,
    pub tau: f64,
    /// Keep every inner MCMC solve inside the range of the current upper
    /// solution, so the sequence of solutions stays nested.
    pub nested: bool,
    /// Optimum selection for the inner MCMC solves.
    pub tie_break: TieBreak,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            max_iters: 10,
            tau: 0.01,
            nested: true,
            tie_break: TieBreak::Midpoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub x: OpinionVector,
    pub cost: f64,
    pub delta_star: f64,
    /// `Ψω(x)`, the collective opinion.
    pub group_value: f64,
    pub kappa_owa: f64,
    pub iterations: usize,
    pub cost_lower: f64,
    pub cost_upper: f64,
    pub converged: bool,
}

fn range_of(x: &[f64]) -> [f64; 2] {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    [lo, hi]
}

/// Approximate OWA-MCC solution by interpolating the mutual consensus
/// radius between `δ₋` and `δ₊`.
///
/// The returned point always satisfies `κ^{Ψω}(x) ≤ ε`. When `o` is already
/// feasible it is returned unchanged with zero iterations.
pub fn ap_owamcc(instance: &Instance, opts: &ApproxOptions) -> Result<ApproxResult> {
    if opts.max_iters == 0 {
        return Err(Error::InvalidArgument(
            "max_iters must be at least 1".into(),
        ));
    }
    if opts.tau.is_nan() || opts.tau <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tau = {} must be positive",
            opts.tau
        )));
    }
    let eps = instance.epsilon();
    let omega = instance.owa_weights();
    let o = instance.opinions();
    let c = instance.costs();
    let kappa = |x: &[f64]| kappa_owa(omega, x);

    let k_o = kappa(o)?;
    if k_o <= eps + KAPPA_TOL {
        return Ok(ApproxResult {
            x: o.clone(),
            cost: 0.0,
            delta_star: kappa_mutual(o),
            group_value: owa(omega, o)?,
            kappa_owa: k_o,
            iterations: 0,
            cost_lower: 0.0,
            cost_upper: 0.0,
            converged: true,
        });
    }
    if !(eps > 0.0 && eps < 0.5) {
        warn!("epsilon = {eps} is outside (0, 1/2); interpolation may stall at a bound");
    }

    let bounds = delta_bounds(eps, omega)?;
    let [cost_lower, cost_upper] = cost_bounds(instance)?;
    let mut d_minus = bounds.delta_minus;
    let mut d_plus = bounds.delta_plus;

    let solve =
        |delta: f64, window: Option<[f64; 2]>| solve_mcmc_with(o, c, delta, window, opts.tie_break);
    let mut x_plus: McmcResult = solve(d_plus, None)?;
    let window = |upper: &McmcResult| opts.nested.then(|| range_of(&upper.x));
    let mut x_minus: McmcResult = solve(d_minus, window(&x_plus))?;
    let mut k_minus = kappa(&x_minus.x)?;
    let mut k_plus = kappa(&x_plus.x)?;

    let mut iterations = 0;
    let mut fixed_point = false;
    while iterations < opts.max_iters && (k_minus - eps).abs() > opts.tau {
        iterations += 1;
        if k_plus - k_minus < KAPPA_TOL {
            // equal measures at both ends: the upper solution is optimal
            x_minus = x_plus.clone();
            k_minus = k_plus;
            d_minus = d_plus;
            fixed_point = true;
            break;
        }
        if d_plus - d_minus <= 2.0 * DELTA_MARGIN {
            break;
        }
        let raw = (eps - k_minus) / (k_plus - k_minus) * (d_plus - d_minus) + d_minus;
        let delta = raw.clamp(d_minus + DELTA_MARGIN, d_plus - DELTA_MARGIN);
        let x = solve(delta, window(&x_plus))?;
        let k = kappa(&x.x)?;
        if k <= eps {
            d_minus = delta;
            x_minus = x;
            k_minus = k;
        } else {
            d_plus = delta;
            x_plus = x;
            k_plus = k;
        }
    }

    let converged = fixed_point || (k_minus - eps).abs() <= opts.tau;
    Ok(ApproxResult {
        group_value: owa(omega, &x_minus.x)?,
        cost: x_minus.cost,
        x: x_minus.x,
        delta_star: d_minus,
        kappa_owa: k_minus,
        iterations,
        cost_lower,
        cost_upper,
        converged,
    })
}

/// An exact solution with consensus diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: OpinionVector,
    pub cost: f64,
    pub group_value: f64,
    pub kappa_owa: f64,
    pub kappa_mutual: f64,
    pub membership: Membership,
    pub solver: String,
    pub lp_iterations: usize,
}

impl Solution {
    fn diagnose(
        instance: &Instance,
        x: Vec<f64>,
        solver: &str,
        lp_iterations: usize,
    ) -> Result<Self> {
        let x = OpinionVector::from_solver(x);
        Ok(Solution {
            cost: cost(instance.opinions(), instance.costs(), &x)?,
            group_value: owa(instance.owa_weights(), &x)?,
            kappa_owa: kappa_owa(instance.owa_weights(), &x)?,
            kappa_mutual: kappa_mutual(&x),
            membership: membership(&x, instance)?,
            solver: solver.to_string(),
            lp_iterations,
            x,
        })
    }
}

/// Linear model for a fixed ranking `order` of the decision makers. Within
/// the cone `x_(1) ≥ … ≥ x_(n)` the OWA aggregate is the linear form
/// `Σ ω_k x_(k)`, so every threshold present in `instance` becomes linear.
fn ordered_model(instance: &Instance, order: Vec<usize>) -> Result<SplitLp> {
    let n = instance.n();
    let omega = instance.owa_weights();
    let w = instance.importance_or_uniform();
    // rank-ordered importance weights
    let w_rank: Vec<f64> = order.iter().map(|&i| w[i]).collect();
    let with_gamma1 = instance.gamma1().is_some();
    let extra = if with_gamma1 {
        vec![(0.0, 1.0); 2 * n]
    } else {
        Vec::new()
    };
    let mut model = SplitLp::new(instance.opinions(), instance.costs(), order, &extra)?;
    model.add_ordering()?;
    if n < 2 {
        return Ok(model);
    }

    let eps = instance.epsilon();
    // x_(1) − ψ(x) ≤ ε
    let mut top: Vec<(usize, f64)> = (0..n).map(|k| (k, -omega[k])).collect();
    top[0].1 += 1.0;
    model.add(&top, &[], Relation::Le, eps)?;
    // ψ(x) − x_(n) ≤ ε
    let mut bottom: Vec<(usize, f64)> = (0..n).map(|k| (k, omega[k])).collect();
    bottom[n - 1].1 -= 1.0;
    model.add(&bottom, &[], Relation::Le, eps)?;

    if let Some(delta) = instance.delta() {
        model.add(&[(0, 1.0), (n - 1, -1.0)], &[], Relation::Le, delta)?;
    }
    if let Some(gamma1) = instance.gamma1() {
        // x_(k) − ψ(x) = u_k − v_k,  Σ w_k (u_k + v_k) ≤ γ₁
        for k in 0..n {
            let mut terms: Vec<(usize, f64)> = (0..n).map(|l| (l, -omega[l])).collect();
            terms[k].1 += 1.0;
            model.add(&terms, &[(k, -1.0), (n + k, 1.0)], Relation::Eq, 0.0)?;
        }
        let budget: Vec<(usize, f64)> = (0..n)
            .flat_map(|k| [(k, w_rank[k]), (n + k, w_rank[k])])
            .collect();
        model.add(&[], &budget, Relation::Le, gamma1)?;
    }
    if let Some(gamma2) = instance.gamma2() {
        // ranks k < l have x_(k) ≥ x_(l), so each |x_(k) − x_(l)| is linear
        let scale = 1.0 / (n - 1) as f64;
        let mut coef = vec![0.0; n];
        for k in 0..n {
            for l in (k + 1)..n {
                let pair = (w_rank[k] + w_rank[l]) * scale;
                coef[k] += pair;
                coef[l] -= pair;
            }
        }
        let terms: Vec<(usize, f64)> = coef.into_iter().enumerate().collect();
        model.add(&terms, &[], Relation::Le, gamma2)?;
    }
    Ok(model)
}

/// Exact (G-)OWA-MCC solution for uniform costs and uniform importance
/// weights, from a single linear program over the decreasing ordering of
/// the opinions.
pub fn solve_symmetric_linear(instance: &Instance) -> Result<Solution> {
    if !instance.costs().is_uniform(UNIFORM_TOL) {
        return Err(Error::SymmetryPrecondition("costs"));
    }
    if let Some(w) = instance.importance_weights() {
        if !w.is_uniform(UNIFORM_TOL) {
            return Err(Error::SymmetryPrecondition("importance weights"));
        }
    }
    let order = decreasing_order(instance.opinions());
    let model = ordered_model(instance, order)?;
    let sol = model
        .solve()?
        .ok_or_else(|| Error::Infeasible("consensus thresholds admit no point".into()))?;
    Solution::diagnose(instance, sol.x, "symmetric-linear", sol.iterations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub x: OpinionVector,
    pub cost: f64,
    /// Ranking achieving the optimum: `ordering[k]` is the index of the
    /// decision maker placed `k`-th from the top.
    pub ordering: Vec<usize>,
    pub lps_solved: usize,
}

/// Lexicographic successor of `perm`; `false` once the last one is reached.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Global OWA-MCC optimum for arbitrary costs by solving one linear program
/// per ranking of the decision makers (the ranking cones cover the cube).
/// Decision makers with identical opinion, cost and importance weight are
/// interchangeable, so only rankings listing them in index order are solved.
pub fn solve_exact_enum(instance: &Instance) -> Result<ExactResult> {
    enumerate_rankings(instance, true)
}

/// Cost, ranking and solution of one feasible ordering.
type Candidate = (f64, Vec<usize>, Vec<f64>);

fn enumerate_rankings(instance: &Instance, prune_twins: bool) -> Result<ExactResult> {
    let n = instance.n();
    if n > MAX_ENUM_N {
        return Err(Error::SizeGuard {
            n,
            limit: MAX_ENUM_N,
        });
    }
    let o = instance.opinions();
    let already = kappa_owa(instance.owa_weights(), o)? <= instance.epsilon() + KAPPA_TOL
        && crate::measures::membership(o, instance)?.all();
    if already {
        return Ok(ExactResult {
            x: o.clone(),
            cost: 0.0,
            ordering: decreasing_order(o),
            lps_solved: 0,
        });
    }

    let c = instance.costs();
    let w = instance.importance_or_uniform();
    let twin = |a: usize, b: usize| prune_twins && o[a] == o[b] && c[a] == c[b] && w[a] == w[b];

    let mut perms = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut pos = vec![0; n];
        for (k, &i) in perm.iter().enumerate() {
            pos[i] = k;
        }
        let canonical = (0..n).all(|a| (a + 1..n).all(|b| !twin(a, b) || pos[a] < pos[b]));
        if canonical {
            perms.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let lps_solved = perms.len();
    let best = perms
        .into_par_iter()
        .map(|order| -> Result<Option<Candidate>> {
            let model = ordered_model(instance, order.clone())?;
            Ok(model.solve()?.map(|s| {
                let value = cost(o, c, &s.x).unwrap_or(f64::INFINITY);
                (value, order, s.x)
            }))
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (None, r) | (r, None) => r,
                    (Some(a), Some(b)) => {
                        // lowest cost, then lexicographically smallest ranking
                        if (b.0, &b.1) < (a.0, &a.1) {
                            Some(b)
                        } else {
                            Some(a)
                        }
                    }
                })
            },
        )?;

    let (value, ordering, x) = best.ok_or_else(|| {
        Error::SolverFailure("every ranking was infeasible, which constant vectors rule out".into())
    })?;
    Ok(ExactResult {
        x: OpinionVector::from_solver(x),
        cost: value,
        ordering,
        lps_solved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::WeightVector;
    use approx::assert_abs_diff_eq;

    pub(crate) fn example_one() -> Instance {
        Instance::new(
            OpinionVector::new(vec![0.05, 0.1, 0.25, 0.3, 0.6]).unwrap(),
            WeightVector::normalized_from(vec![1.0, 4.0, 3.0, 5.0, 2.0]).unwrap(),
            WeightVector::new(vec![0.375, 0.1875, 0.25, 0.0625, 0.125]).unwrap(),
            0.2,
        )
        .unwrap()
    }

    #[test]
    fn delta_bound_examples() {
        let b = delta_bounds(0.2, &[0.375, 0.1875, 0.25, 0.0625, 0.125]).unwrap();
        assert_abs_diff_eq!(b.delta_minus, 0.2 / 0.875, epsilon = 1e-15);
        assert_abs_diff_eq!(b.delta_plus, 0.4, epsilon = 1e-15);
        let b = delta_bounds(0.1, &[0.175, 0.2, 0.0875, 0.25, 0.0325, 0.125, 0.1, 0.03]).unwrap();
        assert_abs_diff_eq!(b.delta_minus, 0.1 / 0.97, epsilon = 1e-15);
        assert_abs_diff_eq!(b.delta_minus, 0.10309, epsilon = 1e-5);
        assert_abs_diff_eq!(b.delta_plus, 0.2, epsilon = 1e-15);
        assert_eq!(delta_bounds(0.6, &[0.5, 0.5]).unwrap().delta_plus, 1.0);
        assert!(delta_bounds(0.2, &[1.0]).is_err());
    }

    #[test]
    fn example_one_cost_bounds() {
        let [lo, hi] = cost_bounds(&example_one()).unwrap();
        assert_abs_diff_eq!(lo, 0.01667, epsilon = 1e-4);
        assert_abs_diff_eq!(hi, 0.03952, epsilon = 1e-4);
    }

    #[test]
    fn example_one_approximation() {
        let r = ap_owamcc(&example_one(), &ApproxOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
        assert_abs_diff_eq!(r.delta_star, 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.group_value, 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(r.cost, 0.0256, epsilon = 1e-4);
        assert!(r.kappa_owa <= 0.2 + 1e-12);
    }

    #[test]
    fn feasible_input_is_returned_untouched() {
        let inst = example_one().with_epsilon(0.45).unwrap();
        let r = ap_owamcc(&inst, &ApproxOptions::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.cost, 0.0);
        assert_eq!(r.x, *inst.opinions());
        assert_eq!(cost_bounds(&inst).unwrap(), [0.0, 0.0]);
        let e = solve_exact_enum(&inst).unwrap();
        assert_eq!(e.cost, 0.0);
        assert_eq!(e.lps_solved, 0);
    }

    #[test]
    fn approximation_argument_errors() {
        let inst = example_one();
        let bad_tau = ApproxOptions {
            tau: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            ap_owamcc(&inst, &bad_tau),
            Err(Error::InvalidArgument(_))
        ));
        let bad_iters = ApproxOptions {
            max_iters: 0,
            ..Default::default()
        };
        assert!(ap_owamcc(&inst, &bad_iters).is_err());
    }

    #[test]
    fn symmetric_trivial_and_two_person() {
        let o = OpinionVector::new(vec![0.1, 0.9, 0.4]).unwrap();
        let inst = Instance::new(
            o.clone(),
            WeightVector::uniform(3).unwrap(),
            WeightVector::new(vec![0.2, 0.5, 0.3]).unwrap(),
            1.0,
        )
        .unwrap()
        .with_delta(1.0)
        .unwrap();
        let s = solve_symmetric_linear(&inst).unwrap();
        assert_eq!(s.cost, 0.0);
        assert_eq!(s.x, o);

        // grid oracle over [0,1]²: minimize 0.5|x0| + 0.5|x1 − 1| with
        // |x0 − x1| ≤ 0.2 (mean aggregate, deviations half the gap)
        let mut best = f64::INFINITY;
        for i in 0..=200 {
            for j in 0..=200 {
                let (a, b) = (i as f64 / 200.0, j as f64 / 200.0);
                if (a - b).abs() / 2.0 <= 0.1 + 1e-12 {
                    best = best.min(0.5 * a + 0.5 * (1.0 - b));
                }
            }
        }
        let inst = Instance::new(
            OpinionVector::new(vec![0.0, 1.0]).unwrap(),
            WeightVector::uniform(2).unwrap(),
            WeightVector::uniform(2).unwrap(),
            0.1,
        )
        .unwrap();
        let s = solve_symmetric_linear(&inst).unwrap();
        assert_abs_diff_eq!(s.cost, best, epsilon = 1e-9);
        assert_abs_diff_eq!(s.cost, 0.4, epsilon = 1e-9);
        assert_abs_diff_eq!(s.x[1] - s.x[0], 0.2, epsilon = 1e-9);
    }

    #[test]
    fn symmetric_rejects_nonuniform() {
        assert_eq!(
            solve_symmetric_linear(&example_one()),
            Err(Error::SymmetryPrecondition("costs"))
        );
        let o = OpinionVector::new(vec![0.1, 0.9]).unwrap();
        let inst = Instance::new(
            o,
            WeightVector::uniform(2).unwrap(),
            WeightVector::uniform(2).unwrap(),
            0.1,
        )
        .unwrap()
        .with_importance_weights(WeightVector::new(vec![0.3, 0.7]).unwrap())
        .unwrap();
        assert_eq!(
            solve_symmetric_linear(&inst),
            Err(Error::SymmetryPrecondition("importance weights"))
        );
    }

    #[test]
    fn exact_enum_size_guard() {
        let inst = Instance::new(
            OpinionVector::new(vec![0.5; 10]).unwrap(),
            WeightVector::uniform(10).unwrap(),
            WeightVector::uniform(10).unwrap(),
            0.1,
        )
        .unwrap();
        assert_eq!(
            solve_exact_enum(&inst),
            Err(Error::SizeGuard { n: 10, limit: 9 })
        );
    }

    #[test]
    fn exact_enum_example_one() {
        let r = solve_exact_enum(&example_one()).unwrap();
        assert_abs_diff_eq!(r.cost, 0.0256, epsilon = 1e-4);
        assert!(kappa_owa(example_one().owa_weights(), &r.x).unwrap() <= 0.2 + 1e-8);
    }

    #[test]
    fn permutations_are_enumerated_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn twin_pruning_keeps_the_optimum() {
        // two identical decision makers
        let inst = Instance::new(
            OpinionVector::new(vec![0.2, 0.2, 0.9, 0.6]).unwrap(),
            WeightVector::new(vec![0.25, 0.25, 0.3, 0.2]).unwrap(),
            WeightVector::new(vec![0.4, 0.1, 0.2, 0.3]).unwrap(),
            0.1,
        )
        .unwrap();
        let pruned = solve_exact_enum(&inst).unwrap();
        assert_eq!(pruned.lps_solved, 12);
        let full = enumerate_rankings(&inst, false).unwrap();
        assert_eq!(full.lps_solved, 24);
        assert_abs_diff_eq!(pruned.cost, full.cost, epsilon = 1e-12);
        assert!(pruned.cost > 0.0);
    }
}
