//! Dense bounded-variable primal simplex.
//!
//! Problems have the form `min cᵀx  s.t.  A x {≤,≥,=} b,  l ≤ x ≤ u` with
//! finite lower bounds. Bounds are handled directly by the ratio test, never
//! as extra rows. Phase one minimizes the sum of artificial variables that
//! are added only for rows whose initial slack would violate its own bound.
//!
//! Pivoting uses Dantzig's largest-reduced-cost rule and falls back to
//! Bland's smallest-index rule after a run of degenerate pivots, which rules
//! out cycling. The rule that produced the final basis is reported in
//! [`LpSolution::pivot_rule`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEASIBILITY_TOL: f64 = 1e-8;
pub const BOUND_TOL: f64 = 1e-10;
const OPTIMALITY_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    /// A problem with no constraints yet. `lower` must be finite; `upper`
    /// may be `+∞`.
    pub fn new(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if lower.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: lower.len(),
            });
        }
        if upper.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: upper.len(),
            });
        }
        for j in 0..n {
            if !lower[j].is_finite() || upper[j].is_nan() || lower[j] > upper[j] {
                return Err(Error::validation(
                    format!("bounds[{j}]"),
                    format!(
                        "[{}, {}] is not a valid finite-below range",
                        lower[j], upper[j]
                    ),
                ));
            }
            if !objective[j].is_finite() {
                return Err(Error::validation(format!("objective[{j}]"), "not finite"));
            }
        }
        Ok(LpProblem {
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower,
            upper,
        })
    }

    /// Builds a problem from dense data in one go.
    pub fn from_dense(
        objective: Vec<f64>,
        matrix: Vec<Vec<f64>>,
        relations: Vec<Relation>,
        rhs: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        if relations.len() != matrix.len() {
            return Err(Error::Dimension {
                expected: matrix.len(),
                found: relations.len(),
            });
        }
        if rhs.len() != matrix.len() {
            return Err(Error::Dimension {
                expected: matrix.len(),
                found: rhs.len(),
            });
        }
        let mut p = LpProblem::new(objective, lower, upper)?;
        for ((row, rel), b) in matrix.into_iter().zip(relations).zip(rhs) {
            p.add_constraint(row, rel, b)?;
        }
        Ok(p)
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::Dimension {
                expected: self.num_vars(),
                found: coeffs.len(),
            });
        }
        if !rhs.is_finite() || coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation(
                "constraint",
                "coefficients must be finite",
            ));
        }
        self.rows.push(coeffs);
        self.relations.push(relation);
        self.rhs.push(rhs);
        Ok(())
    }

    /// Adds a constraint given as `(column, coefficient)` pairs.
    pub fn add_sparse(
        &mut self,
        terms: &[(usize, f64)],
        relation: Relation,
        rhs: f64,
    ) -> Result<()> {
        let mut row = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            if j >= row.len() {
                return Err(Error::Dimension {
                    expected: row.len(),
                    found: j + 1,
                });
            }
            row[j] += a;
        }
        self.add_constraint(row, relation, rhs)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&[f64], Relation, f64)> {
        self.rows
            .iter()
            .zip(&self.relations)
            .zip(&self.rhs)
            .map(|((r, rel), b)| (r.as_slice(), *rel, *b))
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, rel, b) in self.constraints() {
            let ax: f64 = row.iter().zip(x).map(|(a, x)| a * x).sum();
            let v = match rel {
                Relation::Le => ax - b,
                Relation::Ge => b - ax,
                Relation::Eq => (ax - b).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, x)| c * x).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotRule {
    Dantzig,
    /// Dantzig pivoting that switched to Bland's rule at least once.
    DantzigWithBland,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    pub iterations: usize,
    pub pivot_rule: PivotRule,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SimplexOptions {
    /// `None` picks a limit proportional to the problem size.
    pub max_iterations: Option<usize>,
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    solve_lp_with(p, SimplexOptions::default())
}

pub fn solve_lp_with(p: &LpProblem, opts: SimplexOptions) -> Result<LpSolution> {
    let mut tab = Tableau::build(p);
    let limit = opts
        .max_iterations
        .unwrap_or(50 * (tab.m + tab.ncols) + 1_000);

    if tab.has_artificials() {
        let phase1: Vec<f64> = (0..tab.ncols)
            .map(|j| if j >= tab.first_art { 1.0 } else { 0.0 })
            .collect();
        tab.set_costs(&phase1);
        match tab.run(limit)? {
            Outcome::Optimal => {}
            // sum of artificials is bounded below by zero
            Outcome::Unbounded => {
                return Err(Error::SolverFailure("phase one reported unbounded".into()))
            }
        }
        tab.refresh_basic_values(p);
        let infeasibility: f64 = (tab.first_art..tab.ncols).map(|j| tab.value(j)).sum();
        if infeasibility > FEASIBILITY_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: None,
                objective_value: None,
                iterations: tab.iterations,
                pivot_rule: tab.rule_used(),
            });
        }
        tab.fix_artificials();
    }

    let mut phase2 = vec![0.0; tab.ncols];
    phase2[..p.num_vars()].copy_from_slice(&p.objective);
    tab.set_costs(&phase2);
    let remaining = limit.saturating_sub(tab.iterations).max(1);
    if let Outcome::Unbounded = tab.run(remaining + tab.iterations)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: None,
            objective_value: None,
            iterations: tab.iterations,
            pivot_rule: tab.rule_used(),
        });
    }
    tab.refresh_basic_values(p);

    let mut x: Vec<f64> = (0..p.num_vars()).map(|j| tab.value(j)).collect();
    // snap round-off onto the box
    for (j, v) in x.iter_mut().enumerate() {
        *v = v.clamp(p.lower[j], p.upper[j]);
    }
    let violation = p.max_violation(&x);
    if violation > FEASIBILITY_TOL {
        return Err(Error::SolverFailure(format!(
            "optimal basis violates constraints by {violation:e}"
        )));
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: Some(p.evaluate(&x)),
        x: Some(x),
        iterations: tab.iterations,
        pivot_rule: tab.rule_used(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

enum Outcome {
    Optimal,
    Unbounded,
}

/// Working state of one solve. Column layout: structurals, one slack per
/// row, then artificials.
struct Tableau {
    m: usize,
    ncols: usize,
    first_art: usize,
    /// `B⁻¹ [A | I | ±e]`, row-major.
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    /// Column of the initial identity basis for each row, with its sign.
    unit_col: Vec<(usize, f64)>,
    iterations: usize,
    bland: bool,
    used_bland: bool,
}

impl Tableau {
    fn build(p: &LpProblem) -> Self {
        let n = p.num_vars();
        let m = p.num_constraints();

        let mut lower = p.lower.clone();
        let mut upper = p.upper.clone();
        for rel in &p.relations {
            let (l, u) = match rel {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lower.push(l);
            upper.push(u);
        }

        // nonbasic structurals start at their (finite) lower bound
        let x0: Vec<f64> = p.lower.clone();
        let mut residual = Vec::with_capacity(m);
        for (row, _, b) in p.constraints() {
            let ax: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
            residual.push(b - ax);
        }

        let mut art_rows = Vec::new();
        for i in 0..m {
            let r = residual[i];
            let fits = r >= lower[n + i] && r <= upper[n + i];
            if !fits {
                art_rows.push(i);
            }
        }
        let first_art = n + m;
        let ncols = first_art + art_rows.len();
        for _ in &art_rows {
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }

        let mut t = vec![0.0; m * ncols];
        let mut beta = vec![0.0; m];
        let mut basis = vec![0; m];
        let mut state = vec![VarState::AtLower; ncols];
        let mut unit_col = vec![(0, 1.0); m];
        for (i, row) in p.rows.iter().enumerate() {
            let base = i * ncols;
            t[base..base + n].copy_from_slice(row);
            t[base + n + i] = 1.0;
        }
        for i in 0..m {
            // Ge slacks rest at their upper bound of zero
            if upper[n + i] == 0.0 && lower[n + i] == f64::NEG_INFINITY {
                state[n + i] = VarState::AtUpper;
            }
        }
        let mut art_iter = art_rows.iter().enumerate().peekable();
        for i in 0..m {
            if let Some(&(k, &row)) = art_iter.peek() {
                if row == i {
                    art_iter.next();
                    let col = first_art + k;
                    let sigma = if residual[i] >= 0.0 { 1.0 } else { -1.0 };
                    let base = i * ncols;
                    t[base + col] = sigma;
                    if sigma < 0.0 {
                        for v in &mut t[base..base + ncols] {
                            *v = -*v;
                        }
                    }
                    basis[i] = col;
                    state[col] = VarState::Basic;
                    beta[i] = residual[i].abs();
                    unit_col[i] = (col, sigma);
                    continue;
                }
            }
            basis[i] = n + i;
            state[n + i] = VarState::Basic;
            beta[i] = residual[i];
            unit_col[i] = (n + i, 1.0);
        }

        Tableau {
            m,
            ncols,
            first_art,
            t,
            beta,
            basis,
            state,
            lower,
            upper,
            cost: vec![0.0; ncols],
            reduced: vec![0.0; ncols],
            unit_col,
            iterations: 0,
            bland: false,
            used_bland: false,
        }
    }

    fn has_artificials(&self) -> bool {
        self.first_art < self.ncols
    }

    fn rule_used(&self) -> PivotRule {
        if self.used_bland {
            PivotRule::DantzigWithBland
        } else {
            PivotRule::Dantzig
        }
    }

    fn value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::Basic => {
                let i = self
                    .basis
                    .iter()
                    .position(|&b| b == j)
                    .expect("basic column");
                self.beta[i]
            }
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
            VarState::Basic => unreachable!("basic column has no bound value"),
        }
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.cost.copy_from_slice(cost);
        self.reduced.copy_from_slice(cost);
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * self.ncols..(i + 1) * self.ncols];
                for (d, a) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            self.reduced[b] = 0.0;
        }
    }

    /// Artificials may no longer move once phase one is done.
    fn fix_artificials(&mut self) {
        for j in self.first_art..self.ncols {
            self.upper[j] = 0.0;
            if self.state[j] != VarState::Basic {
                self.state[j] = VarState::AtLower;
            }
        }
    }

    /// Recomputes the basic values as `B⁻¹ (b − N x_N)` to shed the round-off
    /// accumulated by the incremental updates. `B⁻¹` is read off the columns
    /// that formed the initial identity basis.
    fn refresh_basic_values(&mut self, p: &LpProblem) {
        let n = p.num_vars();
        let mut r: Vec<f64> = p.rhs.clone();
        for j in 0..self.ncols {
            if self.state[j] == VarState::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v == 0.0 {
                continue;
            }
            if j < n {
                for (i, row) in p.rows.iter().enumerate() {
                    r[i] -= row[j] * v;
                }
            } else if j < self.first_art {
                r[j - n] -= v;
            }
            // nonbasic artificials sit at zero
        }
        for i in 0..self.m {
            let mut acc = 0.0;
            let row = &self.t[i * self.ncols..(i + 1) * self.ncols];
            for (k, &(col, sigma)) in self.unit_col.iter().enumerate() {
                let binv = row[col] * sigma;
                if binv != 0.0 {
                    acc += binv * r[k];
                }
            }
            self.beta[i] = acc;
        }
    }

    fn choose_entering(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.ncols {
            let dir = match self.state[j] {
                VarState::Basic => continue,
                _ if self.upper[j] - self.lower[j] <= 0.0 => continue,
                VarState::AtLower if self.reduced[j] < -OPTIMALITY_TOL => 1.0,
                VarState::AtUpper if self.reduced[j] > OPTIMALITY_TOL => -1.0,
                _ => continue,
            };
            if self.bland {
                return Some((j, dir));
            }
            let score = self.reduced[j].abs();
            if score > best_score {
                best_score = score;
                best = Some((j, dir));
            }
        }
        best
    }

    fn run(&mut self, limit: usize) -> Result<Outcome> {
        let mut degenerate_run = 0;
        loop {
            let Some((q, dir)) = self.choose_entering() else {
                return Ok(Outcome::Optimal);
            };
            if self.iterations >= limit {
                return Err(Error::SolverFailure(format!(
                    "simplex iteration limit of {limit} reached"
                )));
            }
            self.iterations += 1;

            // ratio test
            let mut step = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None;
            let mut leave_key = f64::NEG_INFINITY;
            for i in 0..self.m {
                let alpha = self.t[i * self.ncols + q];
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * alpha;
                let b = self.basis[i];
                let room = if rate < 0.0 {
                    self.beta[i] - self.lower[b]
                } else {
                    self.upper[b] - self.beta[i]
                };
                if room.is_infinite() {
                    continue;
                }
                let limit_i = room.max(0.0) / rate.abs();
                // Dantzig mode breaks ties by pivot size, Bland mode by index
                let key = if self.bland { -(b as f64) } else { alpha.abs() };
                let take = match leave {
                    // a bound flip wins exact ties
                    None => limit_i < step,
                    Some(_) => {
                        limit_i < step - DEGENERATE_STEP
                            || (limit_i <= step + DEGENERATE_STEP && key > leave_key)
                    }
                };
                if take {
                    step = step.min(limit_i);
                    leave = Some((i, rate));
                    leave_key = key;
                }
            }
            if step.is_infinite() {
                return Ok(Outcome::Unbounded);
            }

            if step <= DEGENERATE_STEP {
                degenerate_run += 1;
                if degenerate_run > DEGENERATE_RUN {
                    self.bland = true;
                    self.used_bland = true;
                }
            } else {
                degenerate_run = 0;
                self.bland = false;
            }

            let entering_value = self.nonbasic_value(q) + dir * step;
            if step != 0.0 {
                for i in 0..self.m {
                    let alpha = self.t[i * self.ncols + q];
                    if alpha != 0.0 {
                        self.beta[i] -= dir * alpha * step;
                    }
                }
            }

            match leave {
                None => {
                    // bound flip
                    self.state[q] = if dir > 0.0 {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                }
                Some((r, rate)) => {
                    let out = self.basis[r];
                    self.state[out] = if rate < 0.0 {
                        VarState::AtLower
                    } else {
                        VarState::AtUpper
                    };
                    self.pivot(r, q);
                    self.basis[r] = q;
                    self.state[q] = VarState::Basic;
                    self.beta[r] = entering_value;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let nc = self.ncols;
        let inv = 1.0 / self.t[r * nc + q];
        let (before, rest) = self.t.split_at_mut(r * nc);
        let (pivot_row, after) = rest.split_at_mut(nc);
        for v in pivot_row.iter_mut() {
            *v *= inv;
        }
        pivot_row[q] = 1.0;
        let nz: Vec<usize> = (0..nc).filter(|&j| pivot_row[j] != 0.0).collect();

        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for &j in &nz {
                    row[j] -= f * pivot_row[j];
                }
                row[q] = 0.0;
            }
        };
        for row in before.chunks_exact_mut(nc) {
            eliminate(row);
        }
        for row in after.chunks_exact_mut(nc) {
            eliminate(row);
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for &j in &nz {
                self.reduced[j] -= f * pivot_row[j];
            }
            self.reduced[q] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tight_covering_constraint() {
        let p = LpProblem::from_dense(
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0]],
            vec![Relation::Ge],
            vec![1.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_abs_diff_eq!(s.objective_value.unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn upper_row_limit() {
        let p = LpProblem::from_dense(
            vec![-1.0],
            vec![vec![1.0]],
            vec![Relation::Le],
            vec![0.5],
            vec![0.0],
            vec![1.0],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_abs_diff_eq!(s.x.unwrap()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.objective_value.unwrap(), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn empty_region_is_infeasible() {
        let p = LpProblem::from_dense(
            vec![0.0],
            vec![vec![1.0]],
            vec![Relation::Ge],
            vec![2.0],
            vec![0.0],
            vec![1.0],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.x.is_none());
    }

    #[test]
    fn bound_flip_without_constraints() {
        let p = LpProblem::new(vec![-1.0, 2.0], vec![0.0, -1.0], vec![3.0, 1.0]).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.x.unwrap(), vec![3.0, -1.0]);
    }

    #[test]
    fn equality_rows() {
        // x0 + x1 + x2 = 1, x0 - x2 = 0.2, min x1
        let p = LpProblem::from_dense(
            vec![0.0, 1.0, 0.0],
            vec![vec![1.0, 1.0, 1.0], vec![1.0, 0.0, -1.0]],
            vec![Relation::Eq, Relation::Eq],
            vec![1.0, 0.2],
            vec![0.0; 3],
            vec![1.0; 3],
        )
        .unwrap();
        let s = solve_lp(&p).unwrap();
        let x = s.x.unwrap();
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(x[0], 0.6, epsilon = 1e-10);
        assert_abs_diff_eq!(x[2], 0.4, epsilon = 1e-10);
    }

    #[test]
    fn unbounded_direction() {
        let p = LpProblem::from_dense(
            vec![-1.0, 0.0],
            vec![vec![1.0, -1.0]],
            vec![Relation::Le],
            vec![0.0],
            vec![0.0, 0.0],
            vec![f64::INFINITY, f64::INFINITY],
        )
        .unwrap();
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn malformed_dimensions() {
        assert!(matches!(
            LpProblem::from_dense(
                vec![1.0, 1.0],
                vec![vec![1.0]],
                vec![Relation::Le],
                vec![1.0],
                vec![0.0, 0.0],
                vec![1.0, 1.0],
            ),
            Err(Error::Dimension { .. })
        ));
        assert!(LpProblem::new(vec![1.0], vec![2.0], vec![1.0]).is_err());
        assert!(LpProblem::new(vec![1.0], vec![f64::NEG_INFINITY], vec![1.0]).is_err());
    }

    #[test]
    fn iteration_limit_is_a_solver_failure() {
        let p = LpProblem::from_dense(
            vec![-1.0, -1.0],
            vec![vec![1.0, 2.0], vec![3.0, 1.0]],
            vec![Relation::Le, Relation::Le],
            vec![4.0, 6.0],
            vec![0.0, 0.0],
            vec![10.0, 10.0],
        )
        .unwrap();
        let err = solve_lp_with(
            &p,
            SimplexOptions {
                max_iterations: Some(1),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::SolverFailure(_)));
    }

    #[test]
    fn deterministic_for_identical_input() {
        let p = LpProblem::from_dense(
            vec![-3.0, -2.0, -4.0],
            vec![
                vec![1.0, 1.0, 2.0],
                vec![2.0, 0.0, 3.0],
                vec![2.0, 1.0, 3.0],
            ],
            vec![Relation::Le, Relation::Le, Relation::Le],
            vec![4.0, 5.0, 7.0],
            vec![0.0; 3],
            vec![5.0; 3],
        )
        .unwrap();
        let a = solve_lp(&p).unwrap();
        let b = solve_lp(&p).unwrap();
        assert_eq!(a, b);
    }
}
