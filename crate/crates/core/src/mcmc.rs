//! Minimum cost with mutual consensus: `min Σ c_k |x_k − o_k|` subject to
//! `max(x) − min(x) ≤ δ`.
//!
//! An optimum clamps every opinion into a single interval `[a, a + δ]`, so
//! the problem reduces to minimizing the convex piecewise-linear function
//! `a ↦ Σ c_i · dist(o_i, [a, a + δ])`. Its minimum sits at one of the
//! breakpoints `o_i` or `o_i − δ`, or at an end of the admissible range.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::Relation;
use crate::measures::OpinionVector;
use crate::split::{decreasing_order, SplitLp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcResult {
    pub x: OpinionVector,
    pub cost: f64,
    /// Clamp interval `[a, b]`; for the LP route, `[min x, max x]`.
    pub interval: [f64; 2],
    /// Candidate positions evaluated by the sweep (zero for the LP route).
    pub breakpoints_examined: usize,
}

/// `ξ(x) = Σ c_k |x_k − o_k|`.
pub fn cost(o: &[f64], c: &[f64], x: &[f64]) -> Result<f64> {
    if c.len() != o.len() {
        return Err(Error::Dimension {
            expected: o.len(),
            found: c.len(),
        });
    }
    if x.len() != o.len() {
        return Err(Error::Dimension {
            expected: o.len(),
            found: x.len(),
        });
    }
    Ok(o.iter()
        .zip(c)
        .zip(x)
        .map(|((o, c), x)| c * (x - o).abs())
        .sum())
}

const TIE_TOL: f64 = 1e-12;

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} is outside [0, 1]"
        )));
    }
    Ok(())
}

fn interval_cost(o: &[f64], c: &[f64], a: f64, b: f64) -> f64 {
    o.iter()
        .zip(c)
        .map(|(&o, &c)| {
            if o < a {
                c * (a - o)
            } else if o > b {
                c * (o - b)
            } else {
                0.0
            }
        })
        .sum()
}

/// Which optimum to return when the optimal clamp intervals are not unique.
/// The optimal left ends always form a closed interval.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Smallest optimal left end.
    #[default]
    Smallest,
    /// Midpoint of the optimal left ends; reflecting `o ↦ 1 − o` reflects
    /// the solution.
    Midpoint,
}

/// Exact solver by breakpoint sweep, returning the optimum with the
/// smallest clamp interval left end.
///
/// With `window = Some([lo, hi])` every adjusted opinion is additionally
/// kept inside `[lo, hi]`.
pub fn solve_mcmc(
    o: &[f64],
    c: &[f64],
    delta: f64,
    window: Option<[f64; 2]>,
) -> Result<McmcResult> {
    solve_mcmc_with(o, c, delta, window, TieBreak::Smallest)
}

/// [`solve_mcmc`] with an explicit tie-break rule.
pub fn solve_mcmc_with(
    o: &[f64],
    c: &[f64],
    delta: f64,
    window: Option<[f64; 2]>,
    tie: TieBreak,
) -> Result<McmcResult> {
    check_delta(delta)?;
    if o.is_empty() {
        return Err(Error::Empty);
    }
    if c.len() != o.len() {
        return Err(Error::Dimension {
            expected: o.len(),
            found: c.len(),
        });
    }
    let [lo, hi] = window.unwrap_or([0.0, 1.0]);
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "window [{lo}, {hi}] is not inside [0, 1]"
        )));
    }
    if lo > hi {
        return Err(Error::Infeasible(format!("empty window [{lo}, {hi}]")));
    }

    let (a, b, examined) = if hi - lo <= delta {
        (lo, hi, 1)
    } else {
        let a_max = hi - delta;
        let mut candidates: Vec<f64> = Vec::with_capacity(2 * o.len() + 2);
        candidates.push(lo);
        candidates.push(a_max);
        for &v in o {
            for cand in [v, v - delta] {
                if cand > lo && cand < a_max {
                    candidates.push(cand);
                }
            }
        }
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();

        let values: Vec<f64> = candidates
            .iter()
            .map(|&a| interval_cost(o, c, a, (a + delta).min(hi)))
            .collect();
        let best = values.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = TIE_TOL * best.abs().max(1.0);
        let first = values.iter().position(|&v| v <= best + tol).unwrap();
        let last = values.iter().rposition(|&v| v <= best + tol).unwrap();
        let a = match tie {
            TieBreak::Smallest => candidates[first],
            TieBreak::Midpoint => 0.5 * (candidates[first] + candidates[last]),
        };
        (a, (a + delta).min(hi), candidates.len())
    };

    let x: Vec<f64> = o.iter().map(|v| v.clamp(a, b)).collect();
    let cost = cost(o, c, &x)?;
    Ok(McmcResult {
        x: OpinionVector::from_solver(x),
        cost,
        interval: [a, b],
        breakpoints_examined: examined,
    })
}

/// Exact solver through the sorted linear program: order the opinions
/// decreasingly, require `x_1 ≥ … ≥ x_n` and `x_1 − x_n ≤ δ`, then map the
/// optimum back to the original positions.
pub fn solve_mcmc_lp(o: &[f64], c: &[f64], delta: f64) -> Result<McmcResult> {
    check_delta(delta)?;
    if o.is_empty() {
        return Err(Error::Empty);
    }
    if c.len() != o.len() {
        return Err(Error::Dimension {
            expected: o.len(),
            found: c.len(),
        });
    }
    let n = o.len();
    let mut model = SplitLp::new(o, c, decreasing_order(o), &[])?;
    model.add_ordering()?;
    if n > 1 {
        model.add(&[(0, 1.0), (n - 1, -1.0)], &[], Relation::Le, delta)?;
    }
    let sol = model
        .solve()?
        .ok_or_else(|| Error::SolverFailure("mutual consensus LP reported infeasible".into()))?;
    let lo = sol.x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sol.x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cost = cost(o, c, &sol.x)?;
    Ok(McmcResult {
        x: OpinionVector::from_solver(sol.x),
        cost,
        interval: [lo, hi],
        breakpoints_examined: 0,
    })
}
