//! Domain types, the OWA operator and the consensus measures.
//!
//! All measures are expressed as distances: `0` is perfect agreement. The
//! functions take plain slices so they work on both validated
//! [`OpinionVector`]s and scratch buffers inside the solvers.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ w = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;
/// Slack applied to every `measure ≤ threshold` membership comparison.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

fn check_unit_entries(field: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::validation(
                format!("{field}[{i}]"),
                format!("{v} is outside [0, 1]"),
            ));
        }
    }
    Ok(())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates `weights` as given. Unnormalized input is rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_unit_entries("weights", &weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::validation(
                "weights",
                format!("entries sum to {sum}, expected 1"),
            ));
        }
        Ok(WeightVector(weights))
    }

    /// Divides nonnegative raw weights by their sum.
    pub fn normalized_from(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((i, v)) = raw
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::validation(
                format!("weights[{i}]"),
                format!("{v} is negative or not finite"),
            ));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::validation("weights", "entries sum to zero"));
        }
        Ok(WeightVector(raw.into_iter().map(|v| v / sum).collect()))
    }

    /// `1/n` in every entry.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(WeightVector(vec![1.0 / n as f64; n]))
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|w| (w - u).abs() <= tol)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for WeightVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Opinions on the unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OpinionVector(Vec<f64>);

impl OpinionVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_unit_entries("opinions", &values)?;
        Ok(OpinionVector(values))
    }

    /// Builds a vector from solver output, snapping round-off just outside
    /// the unit interval back onto it.
    pub(crate) fn from_solver(mut values: Vec<f64>) -> Self {
        for v in &mut values {
            *v = v.clamp(0.0, 1.0);
        }
        OpinionVector(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for OpinionVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for OpinionVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        OpinionVector::new(v)
    }
}

impl From<OpinionVector> for Vec<f64> {
    fn from(o: OpinionVector) -> Self {
        o.0
    }
}

/// A complete consensus problem: opinions, normalized costs, OWA weights,
/// optional importance weights and the consensus thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    opinions: OpinionVector,
    costs: WeightVector,
    owa_weights: WeightVector,
    importance_weights: Option<WeightVector>,
    epsilon: f64,
    delta: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
}

fn check_threshold(field: &str, v: f64) -> Result<f64> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::validation(field, format!("{v} is outside [0, 1]")));
    }
    Ok(v)
}

impl Instance {
    pub fn new(
        opinions: OpinionVector,
        costs: WeightVector,
        owa_weights: WeightVector,
        epsilon: f64,
    ) -> Result<Self> {
        let n = opinions.len();
        check_len(n, costs.len())?;
        check_len(n, owa_weights.len())?;
        Ok(Instance {
            opinions,
            costs,
            owa_weights,
            importance_weights: None,
            epsilon: check_threshold("epsilon", epsilon)?,
            delta: None,
            gamma1: None,
            gamma2: None,
        })
    }

    pub fn with_importance_weights(mut self, w: WeightVector) -> Result<Self> {
        check_len(self.n(), w.len())?;
        self.importance_weights = Some(w);
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = Some(check_threshold("delta", delta)?);
        Ok(self)
    }

    pub fn with_gamma1(mut self, gamma1: f64) -> Result<Self> {
        self.gamma1 = Some(check_threshold("gamma1", gamma1)?);
        Ok(self)
    }

    pub fn with_gamma2(mut self, gamma2: f64) -> Result<Self> {
        self.gamma2 = Some(check_threshold("gamma2", gamma2)?);
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = check_threshold("epsilon", epsilon)?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.opinions.len()
    }
    pub fn opinions(&self) -> &OpinionVector {
        &self.opinions
    }
    pub fn costs(&self) -> &WeightVector {
        &self.costs
    }
    pub fn owa_weights(&self) -> &WeightVector {
        &self.owa_weights
    }
    pub fn importance_weights(&self) -> Option<&WeightVector> {
        self.importance_weights.as_ref()
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn delta(&self) -> Option<f64> {
        self.delta
    }
    pub fn gamma1(&self) -> Option<f64> {
        self.gamma1
    }
    pub fn gamma2(&self) -> Option<f64> {
        self.gamma2
    }

    /// Importance weights, falling back to uniform weights when absent.
    pub fn importance_or_uniform(&self) -> WeightVector {
        self.importance_weights
            .clone()
            .unwrap_or_else(|| WeightVector(vec![1.0 / self.n() as f64; self.n()]))
    }
}

/// The averaging operator `Φ` used to form the collective opinion.
#[derive(Debug, Clone, PartialEq)]
pub enum AggregatorSpec {
    ArithmeticMean,
    WeightedMean(WeightVector),
    Owa(WeightVector),
}

impl AggregatorSpec {
    pub fn apply(&self, x: &[f64]) -> Result<f64> {
        match self {
            AggregatorSpec::ArithmeticMean => {
                if x.is_empty() {
                    return Err(Error::Empty);
                }
                Ok(x.iter().sum::<f64>() / x.len() as f64)
            }
            AggregatorSpec::WeightedMean(w) => {
                check_len(w.len(), x.len())?;
                Ok(w.iter().zip(x).map(|(w, x)| w * x).sum())
            }
            AggregatorSpec::Owa(omega) => owa(omega, x),
        }
    }
}

/// Copy of `x` sorted in decreasing order. The sort is stable, and ties
/// contribute identical values, so the tie order never changes a result.
pub fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Ordered weighted average: `Σ ω_k · x_(k)` over `x` sorted decreasingly.
pub fn owa(omega: &[f64], x: &[f64]) -> Result<f64> {
    check_len(omega.len(), x.len())?;
    Ok(owa_sorted(omega, &sorted_desc(x)))
}

/// [`owa`] for input that is already sorted decreasingly.
pub fn owa_sorted(omega: &[f64], sorted: &[f64]) -> f64 {
    omega.iter().zip(sorted).map(|(w, x)| w * x).sum()
}

/// Mutual consensus: the largest pairwise disagreement, `max(x) − min(x)`.
pub fn kappa_mutual(x: &[f64]) -> f64 {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if x.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Largest deviation of any opinion from the collective `Φ(x)`.
pub fn kappa_max_dev(x: &[f64], phi: &AggregatorSpec) -> Result<f64> {
    let g = phi.apply(x)?;
    Ok(x.iter().map(|v| (v - g).abs()).fold(0.0, f64::max))
}

/// `κ^{Ψω}`, the maximum deviation from the OWA aggregate.
pub fn kappa_owa(omega: &[f64], x: &[f64]) -> Result<f64> {
    check_len(omega.len(), x.len())?;
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let s = sorted_desc(x);
    let g = owa_sorted(omega, &s);
    // the extreme opinions carry the largest deviation
    Ok((s[0] - g).abs().max((g - s[s.len() - 1]).abs()))
}

/// Sorted-form evaluation of `κ^{Ψω}`:
/// `max(Σ ω_i (x_1 − x_i), Σ ω_i (x_i − x_n))` for `x` sorted decreasingly.
pub fn kappa_owa_sorted(omega: &[f64], sorted: &[f64]) -> f64 {
    let (Some(&first), Some(&last)) = (sorted.first(), sorted.last()) else {
        return 0.0;
    };
    let top: f64 = omega.iter().zip(sorted).map(|(w, x)| w * (first - x)).sum();
    let bottom: f64 = omega.iter().zip(sorted).map(|(w, x)| w * (x - last)).sum();
    top.max(bottom)
}

/// Importance-weighted mean absolute deviation from `Φ(x)`.
pub fn kappa_weighted_dev(x: &[f64], w: &[f64], phi: &AggregatorSpec) -> Result<f64> {
    check_len(w.len(), x.len())?;
    let g = phi.apply(x)?;
    Ok(w.iter().zip(x).map(|(w, v)| w * (v - g).abs()).sum())
}

/// Weighted pairwise disagreement `Σ_{k<l} (w_k + w_l)/(n − 1) · |x_k − x_l|`.
pub fn kappa_pairwise(x: &[f64], w: &[f64]) -> Result<f64> {
    check_len(w.len(), x.len())?;
    let n = x.len();
    if n < 2 {
        return Err(Error::UndefinedMeasure);
    }
    let scale = 1.0 / (n - 1) as f64;
    let mut total = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            total += (w[k] + w[l]) * (x[k] - x[l]).abs();
        }
    }
    Ok(total * scale)
}

/// A feasible region of one of the consensus constraints.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// `R_δ`: mutual consensus within `delta`.
    Mutual { delta: f64 },
    /// `R_ε^{Ψω}`: every opinion within `epsilon` of the OWA aggregate.
    Owa { omega: WeightVector, epsilon: f64 },
    /// `R_γ^{w,Ψω}`: weighted mean deviation from the OWA aggregate.
    WeightedDev {
        w: WeightVector,
        omega: WeightVector,
        gamma: f64,
    },
    /// `R_γ^w`: weighted pairwise disagreement.
    Pairwise { w: WeightVector, gamma: f64 },
}

impl Region {
    pub fn measure(&self, x: &[f64]) -> Result<f64> {
        match self {
            Region::Mutual { .. } => Ok(kappa_mutual(x)),
            Region::Owa { omega, .. } => kappa_owa(omega, x),
            Region::WeightedDev { w, omega, .. } => {
                kappa_weighted_dev(x, w, &AggregatorSpec::Owa(omega.clone()))
            }
            Region::Pairwise { w, .. } => {
                if x.len() == 1 {
                    // a single opinion has no pairs to disagree over
                    return Ok(0.0);
                }
                kappa_pairwise(x, w)
            }
        }
    }

    pub fn threshold(&self) -> f64 {
        match self {
            Region::Mutual { delta } => *delta,
            Region::Owa { epsilon, .. } => *epsilon,
            Region::WeightedDev { gamma, .. } | Region::Pairwise { gamma, .. } => *gamma,
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.measure(x)? <= self.threshold() + MEMBERSHIP_TOL)
    }
}

/// Which of the instance's regions a point lies in. Regions whose threshold
/// is absent from the instance are reported as `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub owa: bool,
    pub mutual: Option<bool>,
    pub weighted_dev: Option<bool>,
    pub pairwise: Option<bool>,
}

impl Membership {
    pub fn all(&self) -> bool {
        self.owa
            && self.mutual.unwrap_or(true)
            && self.weighted_dev.unwrap_or(true)
            && self.pairwise.unwrap_or(true)
    }
}

/// Evaluates `x` against every region whose threshold `instance` sets.
pub fn membership(x: &[f64], instance: &Instance) -> Result<Membership> {
    check_len(instance.n(), x.len())?;
    let omega = instance.owa_weights().clone();
    let owa = Region::Owa {
        omega: omega.clone(),
        epsilon: instance.epsilon(),
    }
    .contains(x)?;
    let mutual = instance
        .delta()
        .map(|delta| Region::Mutual { delta }.contains(x))
        .transpose()?;
    let weighted_dev = instance
        .gamma1()
        .map(|gamma| {
            Region::WeightedDev {
                w: instance.importance_or_uniform(),
                omega: omega.clone(),
                gamma,
            }
            .contains(x)
        })
        .transpose()?;
    let pairwise = instance
        .gamma2()
        .map(|gamma| {
            Region::Pairwise {
                w: instance.importance_or_uniform(),
                gamma,
            }
            .contains(x)
        })
        .transpose()?;
    Ok(Membership {
        owa,
        mutual,
        weighted_dev,
        pairwise,
    })
}
