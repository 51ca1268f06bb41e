//! Instance files, seeded simulation batches and region sampling.
//!
//! Instance files are JSON objects:
//!
//! ```json
//! { "opinions": [0.05, 0.1, 0.25, 0.3, 0.6],
//!   "costs": [1, 4, 3, 5, 2], "normalize_costs": true,
//!   "owa_weights": [0.375, 0.1875, 0.25, 0.0625, 0.125],
//!   "epsilon": 0.2 }
//! ```
//!
//! with optional `importance_weights`, `delta`, `gamma1` and `gamma2`.
//!
//! Random draws use ChaCha8 seeded with the batch seed; trial `i` reads
//! stream `i` of that generator, so results do not depend on how trials are
//! scheduled across threads.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{kappa_owa, Instance, OpinionVector, Region, WeightVector, MEMBERSHIP_TOL};
use crate::owamcc::{
    ap_owamcc, solve_exact_enum, solve_symmetric_linear, ApproxOptions, MAX_ENUM_N,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub opinions: Vec<f64>,
    pub costs: Vec<f64>,
    pub owa_weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance_weights: Option<Vec<f64>>,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub normalize_costs: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn in_field<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Validation { reason, .. } => Error::validation(field, reason),
        other => Error::validation(field, other.to_string()),
    })
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let opinions = in_field("opinions", OpinionVector::new(self.opinions))?;
        let costs = if self.normalize_costs {
            in_field("costs", WeightVector::normalized_from(self.costs))?
        } else {
            in_field("costs", WeightVector::new(self.costs))?
        };
        let omega = in_field("owa_weights", WeightVector::new(self.owa_weights))?;
        let mut inst = Instance::new(opinions, costs, omega, self.epsilon)?;
        if let Some(w) = self.importance_weights {
            let w = in_field("importance_weights", WeightVector::new(w))?;
            inst = inst.with_importance_weights(w)?;
        }
        if let Some(d) = self.delta {
            inst = inst.with_delta(d)?;
        }
        if let Some(g) = self.gamma1 {
            inst = inst.with_gamma1(g)?;
        }
        if let Some(g) = self.gamma2 {
            inst = inst.with_gamma2(g)?;
        }
        Ok(inst)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            opinions: inst.opinions().to_vec(),
            costs: inst.costs().to_vec(),
            owa_weights: inst.owa_weights().to_vec(),
            importance_weights: inst.importance_weights().map(|w| w.to_vec()),
            epsilon: inst.epsilon(),
            delta: inst.delta(),
            gamma1: inst.gamma1(),
            gamma2: inst.gamma2(),
            normalize_costs: false,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("instance at line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_instance()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_instance(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{} ({context})", path.display()),
            message,
        },
        other => other,
    })
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst))
        .expect("instance files always serialize")
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, instance_to_json(inst)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMode {
    SymmetricLinear,
    ExactEnum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    Uniform,
    Random,
}

impl FromStr for ReferenceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric-linear" | "symmetric" => Ok(ReferenceMode::SymmetricLinear),
            "exact-enum" | "exact" => Ok(ReferenceMode::ExactEnum),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

impl FromStr for CostMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(CostMode::Uniform),
            "random" => Ok(CostMode::Random),
            _ => Err(Error::InvalidArgument(format!("unknown cost mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub trials: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub mode: ReferenceMode,
    pub cost_mode: CostMode,
    pub ap: ApproxOptions,
    /// Worker threads; `None` uses the global rayon pool. Results do not
    /// depend on it, so it is not serialized.
    #[serde(skip)]
    pub threads: Option<usize>,
    /// When off, the timing columns are reported as zero so that reports of
    /// identical batches compare equal byte for byte.
    #[serde(default = "default_true")]
    pub record_timings: bool,
}

fn default_true() -> bool {
    true
}

impl SimulationConfig {
    pub fn new(n: usize, trials: usize, mode: ReferenceMode, cost_mode: CostMode) -> Self {
        SimulationConfig {
            n,
            trials,
            epsilon: 0.15,
            seed: 0,
            mode,
            cost_mode,
            ap: ApproxOptions::default(),
            threads: None,
            record_timings: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidArgument("n must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {} is outside [0, 1]",
                self.epsilon
            )));
        }
        if self.mode == ReferenceMode::ExactEnum && self.n > MAX_ENUM_N {
            return Err(Error::SizeGuard {
                n: self.n,
                limit: MAX_ENUM_N,
            });
        }
        if self.mode == ReferenceMode::SymmetricLinear && self.cost_mode != CostMode::Uniform {
            return Err(Error::InvalidArgument(
                "the symmetric-linear reference needs uniform costs".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub cost_gap: f64,
    pub ap_cost: f64,
    pub reference_cost: f64,
    pub ap_time_ms: f64,
    pub reference_time_ms: f64,
    pub converged: bool,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation (divides by `count − 1`).
    pub std: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        if values.is_empty() {
            return Aggregate {
                mean: 0.0,
                std: 0.0,
            };
        }
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Aggregate { mean, std }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, self.std)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub records: Vec<TrialRecord>,
    pub cost_gap: Aggregate,
    pub ap_time_ms: Aggregate,
    pub reference_time_ms: Aggregate,
}

impl SimulationReport {
    fn from_records(config: SimulationConfig, records: Vec<TrialRecord>) -> Self {
        let column = |f: fn(&TrialRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
        SimulationReport {
            cost_gap: Aggregate::of(&column(|r| r.cost_gap)),
            ap_time_ms: Aggregate::of(&column(|r| r.ap_time_ms)),
            reference_time_ms: Aggregate::of(&column(|r| r.reference_time_ms)),
            config,
            records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Per-trial CSV with columns
    /// `trial,cost_gap,ap_time_ms,reference_time_ms,converged,feasible`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "trial",
            "cost_gap",
            "ap_time_ms",
            "reference_time_ms",
            "converged",
            "feasible",
        ])
        .expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                r.cost_gap.to_string(),
                r.ap_time_ms.to_string(),
                r.reference_time_ms.to_string(),
                u8::from(r.converged).to_string(),
                u8::from(r.feasible).to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }
}

/// Generator for trial `trial` of a batch seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Draws a random instance: uniform opinions, OWA weights as uniform draws
/// divided by their sum, and costs per `cost_mode`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    epsilon: f64,
    cost_mode: CostMode,
) -> Result<Instance> {
    let opinions: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let omega_raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let costs = match cost_mode {
        CostMode::Uniform => WeightVector::uniform(n)?,
        CostMode::Random => {
            let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            WeightVector::normalized_from(raw)?
        }
    };
    Instance::new(
        OpinionVector::new(opinions)?,
        costs,
        WeightVector::normalized_from(omega_raw)?,
        epsilon,
    )
}

pub fn trial_instance(config: &SimulationConfig, trial: usize) -> Result<Instance> {
    let mut rng = trial_rng(config.seed, trial);
    random_instance(&mut rng, config.n, config.epsilon, config.cost_mode)
}

fn run_trial(config: &SimulationConfig, trial: usize) -> Result<TrialRecord> {
    let inst = trial_instance(config, trial)?;
    let timed = |start: Instant| {
        if config.record_timings {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        }
    };

    let start = Instant::now();
    let ap = ap_owamcc(&inst, &config.ap)?;
    let ap_time_ms = timed(start);

    let start = Instant::now();
    let reference_cost = match config.mode {
        ReferenceMode::SymmetricLinear => solve_symmetric_linear(&inst)?.cost,
        ReferenceMode::ExactEnum => solve_exact_enum(&inst)?.cost,
    };
    let reference_time_ms = timed(start);

    let feasible = kappa_owa(inst.owa_weights(), &ap.x)? <= inst.epsilon() + MEMBERSHIP_TOL;
    Ok(TrialRecord {
        trial,
        cost_gap: ap.cost - reference_cost,
        ap_cost: ap.cost,
        reference_cost,
        ap_time_ms,
        reference_time_ms,
        converged: ap.converged,
        feasible,
    })
}

/// Runs `config.trials` independent trials comparing the approximation with
/// the reference solver.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let run = || -> Result<Vec<TrialRecord>> {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect()
    };
    let records = match config.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(SimulationReport::from_records(config.clone(), records))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    Mutual,
    Owa,
    WeightedDev,
    Pairwise,
}

impl FromStr for RegionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mutual" | "delta" => Ok(RegionKind::Mutual),
            "owa" | "epsilon" => Ok(RegionKind::Owa),
            "weighted-dev" | "gamma1" => Ok(RegionKind::WeightedDev),
            "pairwise" | "gamma2" => Ok(RegionKind::Pairwise),
            _ => Err(Error::InvalidArgument(format!(
                "unknown region `{s}` (expected mutual, owa, weighted-dev or pairwise)"
            ))),
        }
    }
}

/// The region of `kind` with the threshold taken from `instance`.
pub fn region_of(instance: &Instance, kind: RegionKind) -> Result<Region> {
    let missing = |name: &str| Error::InvalidArgument(format!("instance sets no {name}"));
    Ok(match kind {
        RegionKind::Mutual => Region::Mutual {
            delta: instance.delta().ok_or_else(|| missing("delta"))?,
        },
        RegionKind::Owa => Region::Owa {
            omega: instance.owa_weights().clone(),
            epsilon: instance.epsilon(),
        },
        RegionKind::WeightedDev => Region::WeightedDev {
            w: instance.importance_or_uniform(),
            omega: instance.owa_weights().clone(),
            gamma: instance.gamma1().ok_or_else(|| missing("gamma1"))?,
        },
        RegionKind::Pairwise => Region::Pairwise {
            w: instance.importance_or_uniform(),
            gamma: instance.gamma2().ok_or_else(|| missing("gamma2"))?,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub coords: Vec<f64>,
    pub inside: bool,
}

pub fn label_points(region: &Region, points: Vec<Vec<f64>>) -> Result<Vec<LabeledPoint>> {
    points
        .into_iter()
        .map(|coords| {
            let inside = region.contains(&coords)?;
            Ok(LabeledPoint { coords, inside })
        })
        .collect()
}

/// `count` uniform samples from the cube `[0,1]^n`, labeled by membership.
pub fn sample_region(
    instance: &Instance,
    kind: RegionKind,
    count: usize,
    seed: u64,
) -> Result<Vec<LabeledPoint>> {
    let region = region_of(instance, kind)?;
    let n = instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
        .collect();
    label_points(&region, points)
}

/// Point cloud CSV: `x1,…,xn,inside`.
pub fn points_to_csv(points: &[LabeledPoint]) -> String {
    let n = points.first().map_or(0, |p| p.coords.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("inside".into());
    w.write_record(&header).expect("in-memory write");
    for p in points {
        let mut row: Vec<String> = p.coords.iter().map(f64::to_string).collect();
        row.push(u8::from(p.inside).to_string());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}
