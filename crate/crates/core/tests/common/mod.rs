//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use mcc_core::lp::{LpProblem, Relation};
use mcc_core::{Instance, OpinionVector, WeightVector};
use rand::Rng;

pub fn unit_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

pub fn simplex_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // bounded away from zero so normalization is well conditioned
    let raw: Vec<f64> = (0..n).map(|_| 0.01 + rng.random::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// A vector with spread exactly `spread` placed at a random offset.
pub fn with_spread<R: Rng>(rng: &mut R, n: usize, spread: f64) -> Vec<f64> {
    let u = unit_vec(rng, n);
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let offset = rng.random::<f64>() * (1.0 - spread);
    if hi - lo < 1e-12 {
        return vec![offset; n];
    }
    let mut x: Vec<f64> = u
        .iter()
        .map(|v| offset + spread * (v - lo) / (hi - lo))
        .collect();
    // pin the extremes so the spread is exact
    let imax = (0..n).max_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
    let imin = (0..n).min_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
    x[imin] = offset;
    x[imax] = offset + spread;
    x
}

pub fn random_instance<R: Rng>(rng: &mut R, n: usize, eps: f64, uniform_costs: bool) -> Instance {
    let c = if uniform_costs {
        WeightVector::uniform(n).unwrap()
    } else {
        WeightVector::new(simplex_vec(rng, n)).unwrap()
    };
    Instance::new(
        OpinionVector::new(unit_vec(rng, n)).unwrap(),
        c,
        WeightVector::new(simplex_vec(rng, n)).unwrap(),
        eps,
    )
    .unwrap()
}

/// OWA by repeated extraction of the largest remaining value.
pub fn owa_by_selection(omega: &[f64], x: &[f64]) -> f64 {
    let mut left: Vec<f64> = x.to_vec();
    let mut total = 0.0;
    for w in omega {
        let (i, _) = left
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        total += w * left.swap_remove(i);
    }
    total
}

/// `max_i |x_i − Ψ(x)|` evaluated term by term.
pub fn owa_deviation_brute(omega: &[f64], x: &[f64]) -> f64 {
    let g = owa_by_selection(omega, x);
    x.iter().map(|v| (v - g).abs()).fold(0.0, f64::max)
}

/// Σ_{i<j} (w_i + w_j)|x_i − x_j| / (n − 1) over explicit pairs.
pub fn pairwise_brute(x: &[f64], w: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += (w[i] + w[j]) * (x[i] - x[j]).abs();
        }
    }
    s / (n - 1) as f64
}

/// Solves `A y = b` by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..n {
                        a[r][k] -= f * a[col][k];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Optimal value by exhaustive vertex enumeration: every choice of `n`
/// active hyperplanes among constraint rows and variable bounds. `None` when
/// no vertex is feasible (the box keeps every nonempty region pointed).
pub fn vertex_enumeration(p: &LpProblem) -> Option<f64> {
    let n = p.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, _, rhs) in p.constraints() {
        planes.push((row.to_vec(), rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), p.lower()[j]));
        planes.push((e, p.upper()[j]));
    }
    let feasible = |x: &[f64]| {
        (0..n).all(|j| x[j] >= p.lower()[j] - 1e-9 && x[j] <= p.upper()[j] + 1e-9)
            && p.constraints().all(|(row, rel, rhs)| {
                let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
                match rel {
                    Relation::Le => lhs <= rhs + 1e-9,
                    Relation::Ge => lhs >= rhs - 1e-9,
                    Relation::Eq => (lhs - rhs).abs() <= 1e-9,
                }
            })
    };
    let mut best: Option<f64> = None;
    let m = planes.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v = p.evaluate(&x);
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        // next n-combination of m
        let mut k = n;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if pick[k] < m - n + k {
                pick[k] += 1;
                for l in k + 1..n {
                    pick[l] = pick[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Smallest cost of clamping `o` into an interval of width `delta`, by
/// ternary search on the convex left-end cost.
pub fn mcmc_ternary(o: &[f64], c: &[f64], delta: f64) -> f64 {
    let f = |a: f64| -> f64 {
        o.iter()
            .zip(c)
            .map(|(&v, &w)| w * (a - v).max(0.0) + w * (v - a - delta).max(0.0))
            .sum()
    };
    let (mut lo, mut hi) = (0.0f64, (1.0 - delta).max(0.0));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi))
}

/// Feasible point with `κ^{Ψω} = ε` and spread exactly `2ε`, built as
/// `(2ε, …, 2ε, β, 0, …, 0)` with `β` placed where the cumulative weight
/// passes one half. `None` when an extreme weight exceeds one half, in which
/// case no feasible point reaches spread `2ε`. Requires `2ε ≤ 1`.
pub fn upper_sharpness_witness(omega: &[f64], eps: f64) -> Option<Vec<f64>> {
    let n = omega.len();
    let mut s = 0.0;
    for k in 0..n {
        if s + omega[k] > 0.5 {
            let beta = eps * (1.0 - 2.0 * s) / omega[k];
            if k == 0 || (k == n - 1 && beta > 0.0) {
                return None;
            }
            let mut x = vec![2.0 * eps; k];
            x.push(beta);
            x.resize(n, 0.0);
            return Some(x);
        }
        s += omega[k];
    }
    None
}

/// Vertex of `{0, d}^n` whose OWA deviation is `(1 − min(ω₁, ω_n)) d`.
pub fn lower_sharpness_witness(omega: &[f64], d: f64) -> Vec<f64> {
    let n = omega.len();
    if omega[0] <= omega[n - 1] {
        let mut x = vec![0.0; n];
        x[0] = d;
        x
    } else {
        let mut x = vec![d; n];
        x[n - 1] = 0.0;
        x
    }
}
