//! Python module `mutual_consensus`. Solver results come back as plain
//! dictionaries with the same field names as the JSON output of the CLI.

use mcc_core::harness::{self, CostMode, ReferenceMode, RegionKind, SimulationConfig};
use mcc_core::{ApproxOptions, OpinionVector, TieBreak, WeightVector};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

pyo3::create_exception!(mutual_consensus, InfeasibleError, PyValueError);

fn to_py(err: mcc_core::Error) -> PyErr {
    match err {
        mcc_core::Error::Infeasible(_) => InfeasibleError::new_err(err.to_string()),
        mcc_core::Error::SolverFailure(_) => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Serializes through JSON so nested results become dicts and lists.
fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse<T: std::str::FromStr<Err = mcc_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

/// An OWA-based consensus problem.
#[pyclass(name = "Instance", module = "mutual_consensus")]
struct PyInstance {
    inner: mcc_core::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (opinions, costs, owa_weights, epsilon, *, importance_weights=None, delta=None, gamma1=None, gamma2=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        opinions: Vec<f64>,
        costs: Vec<f64>,
        owa_weights: Vec<f64>,
        epsilon: f64,
        importance_weights: Option<Vec<f64>>,
        delta: Option<f64>,
        gamma1: Option<f64>,
        gamma2: Option<f64>,
    ) -> PyResult<Self> {
        let build = || -> mcc_core::Result<mcc_core::Instance> {
            let mut inst = mcc_core::Instance::new(
                OpinionVector::new(opinions)?,
                WeightVector::new(costs)?,
                WeightVector::new(owa_weights)?,
                epsilon,
            )?;
            if let Some(w) = importance_weights {
                inst = inst.with_importance_weights(WeightVector::new(w)?)?;
            }
            if let Some(d) = delta {
                inst = inst.with_delta(d)?;
            }
            if let Some(g) = gamma1 {
                inst = inst.with_gamma1(g)?;
            }
            if let Some(g) = gamma2 {
                inst = inst.with_gamma2(g)?;
            }
            Ok(inst)
        };
        build().map(|inner| PyInstance { inner }).map_err(to_py)
    }

    /// Reads an instance from a JSON file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        harness::load_instance(path)
            .map(|inner| PyInstance { inner })
            .map_err(to_py)
    }

    /// Parses an instance from JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        harness::parse_instance(text)
            .map(|inner| PyInstance { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        harness::instance_to_json(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn opinions(&self) -> Vec<f64> {
        self.inner.opinions().to_vec()
    }

    #[getter]
    fn costs(&self) -> Vec<f64> {
        self.inner.costs().to_vec()
    }

    #[getter]
    fn owa_weights(&self) -> Vec<f64> {
        self.inner.owa_weights().to_vec()
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn delta(&self) -> Option<f64> {
        self.inner.delta()
    }

    fn with_epsilon(&self, epsilon: f64) -> PyResult<Self> {
        let inner = self.inner.clone().with_epsilon(epsilon).map_err(to_py)?;
        Ok(PyInstance { inner })
    }

    /// Which configured regions contain `x`; unset thresholds map to `None`.
    fn membership<'py>(&self, py: Python<'py>, x: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &mcc_core::membership(&x, &self.inner).map_err(to_py)?)
    }

    /// `{"delta_minus", "delta_plus", "cost_lower", "cost_upper"}`.
    fn bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let b = mcc_core::delta_bounds(self.inner.epsilon(), self.inner.owa_weights())
            .map_err(to_py)?;
        let [lo, hi] = mcc_core::cost_bounds(&self.inner).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("delta_minus", b.delta_minus)?;
        d.set_item("delta_plus", b.delta_plus)?;
        d.set_item("cost_lower", lo)?;
        d.set_item("cost_upper", hi)?;
        Ok(d)
    }

    #[pyo3(signature = (max_iters=10, tau=0.01, nested=true, tie_break="midpoint"))]
    fn approx<'py>(
        &self,
        py: Python<'py>,
        max_iters: usize,
        tau: f64,
        nested: bool,
        tie_break: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let tie_break = match tie_break {
            "midpoint" => TieBreak::Midpoint,
            "smallest" => TieBreak::Smallest,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown tie_break {other:?}"
                )))
            }
        };
        let opts = ApproxOptions {
            max_iters,
            tau,
            nested,
            tie_break,
        };
        let r = py
            .detach(|| mcc_core::ap_owamcc(&self.inner, &opts))
            .map_err(to_py)?;
        to_dict(py, &r)
    }

    fn exact<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py
            .detach(|| mcc_core::solve_exact_enum(&self.inner))
            .map_err(to_py)?;
        to_dict(py, &r)
    }

    fn symmetric<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py
            .detach(|| mcc_core::solve_symmetric_linear(&self.inner))
            .map_err(to_py)?;
        to_dict(py, &r)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, epsilon={})",
            self.inner.n(),
            self.inner.epsilon()
        )
    }
}

#[pyfunction]
fn owa(omega: Vec<f64>, x: Vec<f64>) -> PyResult<f64> {
    mcc_core::owa(&omega, &x).map_err(to_py)
}

#[pyfunction]
fn kappa_mutual(x: Vec<f64>) -> f64 {
    mcc_core::kappa_mutual(&x)
}

#[pyfunction]
fn kappa_owa(omega: Vec<f64>, x: Vec<f64>) -> PyResult<f64> {
    mcc_core::kappa_owa(&omega, &x).map_err(to_py)
}

/// Weighted mean deviation from the OWA of `x` under `omega`.
#[pyfunction]
fn kappa_weighted_dev(x: Vec<f64>, w: Vec<f64>, omega: Vec<f64>) -> PyResult<f64> {
    let phi = mcc_core::AggregatorSpec::Owa(WeightVector::new(omega).map_err(to_py)?);
    mcc_core::kappa_weighted_dev(&x, &w, &phi).map_err(to_py)
}

#[pyfunction]
fn kappa_pairwise(x: Vec<f64>, w: Vec<f64>) -> PyResult<f64> {
    mcc_core::kappa_pairwise(&x, &w).map_err(to_py)
}

#[pyfunction]
fn delta_bounds(epsilon: f64, omega: Vec<f64>) -> PyResult<(f64, f64)> {
    let b = mcc_core::delta_bounds(epsilon, &omega).map_err(to_py)?;
    Ok((b.delta_minus, b.delta_plus))
}

/// Minimum cost of bringing `opinions` within `delta` of each other.
#[pyfunction]
#[pyo3(signature = (opinions, costs, delta, window=None, tie_break="smallest"))]
fn solve_mcmc<'py>(
    py: Python<'py>,
    opinions: Vec<f64>,
    costs: Vec<f64>,
    delta: f64,
    window: Option<(f64, f64)>,
    tie_break: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let tie = match tie_break {
        "smallest" => TieBreak::Smallest,
        "midpoint" => TieBreak::Midpoint,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown tie_break {other:?}"
            )))
        }
    };
    let window = window.map(|(a, b)| [a, b]);
    let r = mcc_core::solve_mcmc_with(&opinions, &costs, delta, window, tie).map_err(to_py)?;
    to_dict(py, &r)
}

/// Seeded batch comparing the approximation with an exact reference.
#[pyfunction]
#[pyo3(signature = (n, trials, epsilon=0.15, seed=0, mode="symmetric-linear", cost_mode="uniform", threads=None, record_timings=true))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    n: usize,
    trials: usize,
    epsilon: f64,
    seed: u64,
    mode: &str,
    cost_mode: &str,
    threads: Option<usize>,
    record_timings: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = SimulationConfig::new(
        n,
        trials,
        parse::<ReferenceMode>(mode)?,
        parse::<CostMode>(cost_mode)?,
    );
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.record_timings = record_timings;
    let report = py.detach(|| harness::run_simulation(&cfg)).map_err(to_py)?;
    py.import("json")?
        .call_method1("loads", (report.to_json(),))
}

/// `count` uniform points of the cube, each as `(coords, inside)`.
#[pyfunction]
#[pyo3(signature = (instance, region, count, seed=0))]
fn sample_region(
    instance: &PyInstance,
    region: &str,
    count: usize,
    seed: u64,
) -> PyResult<Vec<(Vec<f64>, bool)>> {
    let kind = parse::<RegionKind>(region)?;
    let points = harness::sample_region(&instance.inner, kind, count, seed).map_err(to_py)?;
    Ok(points.into_iter().map(|p| (p.coords, p.inside)).collect())
}

#[pymodule]
fn mutual_consensus(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_function(wrap_pyfunction!(owa, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_mutual, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_owa, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_weighted_dev, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_pairwise, m)?)?;
    m.add_function(wrap_pyfunction!(delta_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mcmc, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sample_region, m)?)?;
    Ok(())
}
