//! Python bindings: `import etacert_py`.

use ::etacert as core;
use core::npa::NpaLevel;
use core::quantum::{QuantumRealization, SearchConfig};
use core::validate::{Suite, ValidateConfig};
use core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::SolverNonConvergence { .. } => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_level(level: &str) -> PyResult<NpaLevel> {
    level.parse().map_err(to_py)
}

fn search_config(restarts: usize, seed: u64) -> SearchConfig {
    SearchConfig {
        restarts,
        rng_seed: seed,
        ..SearchConfig::default()
    }
}

/// Probabilities p[s][o], rows x0y0, x0y1, x1y0, x1y1 and columns
/// ++, +0, 0+, 00.
#[pyclass(name = "Behavior", from_py_object)]
#[derive(Clone)]
struct PyBehavior {
    inner: core::Behavior,
}

#[pymethods]
impl PyBehavior {
    #[new]
    fn new(p: [[f64; 4]; 4]) -> Self {
        Self {
            inner: core::Behavior::new(p),
        }
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        core::Behavior::from_json(s)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn p(&self) -> [[f64; 4]; 4] {
        self.inner.p
    }

    fn eberhard(&self) -> f64 {
        self.inner.eberhard_value()
    }

    fn chsh(&self) -> PyResult<f64> {
        self.inner.chsh_value().map_err(to_py)
    }

    fn is_no_signaling(&self, tol: f64) -> bool {
        self.inner.check_no_signaling(tol).passed
    }

    /// Behavior seen through detectors of efficiency `eta` and dark-count
    /// probability `xi`.
    fn with_detection_noise(&self, eta: f64, xi: f64) -> PyResult<Self> {
        let noise = core::NoiseParams::symmetric(eta, xi);
        noise.validate().map_err(to_py)?;
        Ok(Self {
            inner: core::apply_detection_noise(&self.inner, &noise),
        })
    }
}

/// Two-qubit realization: state angle followed by the four measurement angles.
#[pyclass(name = "Realization", from_py_object)]
#[derive(Clone)]
struct PyRealization {
    inner: QuantumRealization,
}

#[pymethods]
impl PyRealization {
    #[new]
    fn new(angles: [f64; 5]) -> Self {
        Self {
            inner: QuantumRealization::from_angles(angles),
        }
    }

    #[getter]
    fn angles(&self) -> [f64; 5] {
        self.inner.angles()
    }

    fn behavior(&self) -> PyBehavior {
        PyBehavior {
            inner: self.inner.probabilities(),
        }
    }

    fn noisy_eberhard(&self, eta: f64, xi: f64) -> f64 {
        core::quantum::noisy_eberhard(&self.inner, eta, xi)
    }
}

#[pyclass(name = "QrBound", get_all, skip_from_py_object)]
struct PyQrBound {
    eta: f64,
    realization: PyRealization,
    achieved_value: f64,
    iterations: usize,
    e_obs: f64,
    xi: f64,
    json: String,
}

#[pymethods]
impl PyQrBound {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "QrBound(eta={}, e_obs={}, xi={})",
            self.eta, self.e_obs, self.xi
        )
    }
}

#[pyclass(name = "NpaBound", get_all, skip_from_py_object)]
struct PyNpaBound {
    eta: f64,
    lower: f64,
    level: String,
    iterations: usize,
    e_obs: f64,
    xi: f64,
}

#[pymethods]
impl PyNpaBound {
    fn __repr__(&self) -> String {
        format!(
            "NpaBound(eta={}, level={}, e_obs={}, xi={})",
            self.eta, self.level, self.e_obs, self.xi
        )
    }
}

/// Smallest efficiency reached by an explicit two-qubit realization.
#[pyfunction]
#[pyo3(signature = (e_obs, xi=0.0, tol=1e-7, restarts=32, seed=0x5eed))]
fn min_efficiency_qr(
    py: Python<'_>,
    e_obs: f64,
    xi: f64,
    tol: f64,
    restarts: usize,
    seed: u64,
) -> PyResult<PyQrBound> {
    let cfg = search_config(restarts, seed);
    let r = py
        .detach(|| core::quantum::min_efficiency_qr(e_obs, xi, tol, &cfg))
        .map_err(to_py)?;
    let json = serde_json::to_string(&r).map_err(|e| to_py(e.into()))?;
    Ok(PyQrBound {
        eta: r.eta,
        realization: PyRealization {
            inner: r.realization,
        },
        achieved_value: r.achieved_value,
        iterations: r.iterations,
        e_obs: r.e_obs,
        xi: r.xi,
        json,
    })
}

/// Certified lower bound on the efficiency from the NPA relaxation.
#[pyfunction]
#[pyo3(signature = (e_obs, xi=0.0, tol=1e-7, level="2"))]
fn min_efficiency_npa(
    py: Python<'_>,
    e_obs: f64,
    xi: f64,
    tol: f64,
    level: &str,
) -> PyResult<PyNpaBound> {
    let level = parse_level(level)?;
    let b = py
        .detach(|| core::npa::min_efficiency_npa(e_obs, xi, tol, level))
        .map_err(to_py)?;
    Ok(PyNpaBound {
        eta: b.eta,
        lower: b.lower,
        level: b.level.to_string(),
        iterations: b.iterations,
        e_obs: b.e_obs,
        xi: b.xi,
    })
}

/// Largest noisy Eberhard value over the relaxation, as (primal, certified bound).
#[pyfunction]
#[pyo3(signature = (eta, xi=0.0, level="2"))]
fn max_noisy_eberhard_sdp(py: Python<'_>, eta: f64, xi: f64, level: &str) -> PyResult<(f64, f64)> {
    let level = parse_level(level)?;
    let m = py
        .detach(|| core::npa::max_noisy_eberhard_sdp(eta, xi, level))
        .map_err(to_py)?;
    Ok((m.value, m.dual_value))
}

/// Largest noisy Eberhard value found by the realization search.
#[pyfunction]
#[pyo3(signature = (eta, xi=0.0, restarts=32, seed=0x5eed))]
fn max_noisy_eberhard(
    py: Python<'_>,
    eta: f64,
    xi: f64,
    restarts: usize,
    seed: u64,
) -> PyResult<(f64, PyRealization)> {
    let cfg = search_config(restarts, seed);
    let s = py
        .detach(|| core::quantum::max_noisy_eberhard(eta, xi, &cfg))
        .map_err(to_py)?;
    Ok((s.value, PyRealization { inner: s.witness }))
}

#[pyfunction]
fn eta_ns(e_obs: f64) -> PyResult<f64> {
    core::analytic::eta_ns(e_obs).map_err(to_py)
}

/// NPA relaxation at fixed efficiency in the JSON interchange form.
#[pyfunction]
#[pyo3(signature = (level="2", eta=1.0, xi=0.0))]
fn export_sdp(level: &str, eta: f64, xi: f64) -> PyResult<String> {
    let sdp = core::npa::export_sdp(parse_level(level)?, eta, xi).map_err(to_py)?;
    sdp.to_json().map_err(to_py)
}

type CheckTuple = (String, String, bool, f64, f64);

/// Runs a property suite and returns (suite, name, passed, measured, tolerance) tuples.
#[pyfunction]
#[pyo3(signature = (suite="all", seed=0x5eed))]
fn validate(py: Python<'_>, suite: &str, seed: u64) -> PyResult<Vec<CheckTuple>> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let cfg = ValidateConfig {
        seed,
        ..ValidateConfig::default()
    };
    let checks = py.detach(|| core::validate::run_suite(suite, &cfg));
    Ok(checks
        .into_iter()
        .map(|c| (c.suite, c.name, c.passed, c.measured, c.tolerance))
        .collect())
}

#[pymodule]
fn etacert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QUANTUM_MAX_EBERHARD", core::QUANTUM_MAX_EBERHARD)?;
    m.add("EBERHARD_THRESHOLD", core::EBERHARD_THRESHOLD)?;
    m.add_class::<PyBehavior>()?;
    m.add_class::<PyRealization>()?;
    m.add_class::<PyQrBound>()?;
    m.add_class::<PyNpaBound>()?;
    m.add_function(wrap_pyfunction!(min_efficiency_qr, m)?)?;
    m.add_function(wrap_pyfunction!(min_efficiency_npa, m)?)?;
    m.add_function(wrap_pyfunction!(max_noisy_eberhard_sdp, m)?)?;
    m.add_function(wrap_pyfunction!(max_noisy_eberhard, m)?)?;
    m.add_function(wrap_pyfunction!(eta_ns, m)?)?;
    m.add_function(wrap_pyfunction!(export_sdp, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
