//! Python bindings for the condeig solvers.
//!
//! Exposes scenario generation and I/O, the single-budget solver, budget
//! sweeps, asymptotic bounds, and the interference-axiom validator. Results
//! come back as plain dicts/lists so no Python-side schema is needed.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use condeig::{
    build_mapping, generate_scenario, lambda_infinity, logspace, norm_equivalence_alpha,
    scenario::{load_scenario, save_scenario, scenario_from_str, scenario_to_string},
    solve_num, sweep as run_sweep, validate_interference_axioms, Error, MonotoneNorm,
    NetworkScenario, NormKind, NumProblem, PerformancePoint, ScenarioConfig, SolverConfig,
    SweepOptions,
};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. }
        | Error::PossiblyNonPrimitive { .. }
        | Error::DegenerateMapping
        | Error::AssumptionViolated { .. }
        | Error::UnboundedUtility
        | Error::MonotonicityViolation(_)
        | Error::SweepAborted { .. }
        | Error::NotInterferenceFunction { .. }
        | Error::LimitOverflow { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A synthetic network scenario: channel gains, noise, and SINR targets.
#[pyclass(name = "Scenario", skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: NetworkScenario,
}

#[pymethods]
impl PyScenario {
    #[getter]
    fn num_links(&self) -> usize {
        self.inner.num_links
    }

    /// Row-major N×N channel gain matrix as a nested list.
    #[getter]
    fn gain_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.inner.num_links;
        (0..n)
            .map(|i| self.inner.gain_matrix[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    #[getter]
    fn noise_power(&self) -> Vec<f64> {
        self.inner.noise_power.clone()
    }

    #[getter]
    fn sinr_targets(&self) -> Vec<f64> {
        self.inner.sinr_targets.clone()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn to_toml(&self) -> PyResult<String> {
        scenario_to_string(&self.inner).map_err(to_py_err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        save_scenario(&self.inner, path).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(num_links={}, seed={})",
            self.inner.num_links, self.inner.seed
        )
    }
}

#[pyfunction]
#[pyo3(signature = (links, seed=0, area_side=100.0, path_loss_exponent=3.7,
    reference_loss_db=30.0, noise_psd_dbm_per_hz=-154.0, bandwidth_hz=1e7,
    target_sinr_db=0.0))]
#[allow(clippy::too_many_arguments)]
fn generate(
    links: usize,
    seed: u64,
    area_side: f64,
    path_loss_exponent: f64,
    reference_loss_db: f64,
    noise_psd_dbm_per_hz: f64,
    bandwidth_hz: f64,
    target_sinr_db: f64,
) -> PyResult<PyScenario> {
    let config = ScenarioConfig {
        num_links: links,
        area_side,
        path_loss_exponent,
        reference_loss_db,
        noise_psd_dbm_per_hz,
        bandwidth_hz,
        target_sinr_db,
        seed,
    };
    let inner = generate_scenario(&config).map_err(to_py_err)?;
    Ok(PyScenario { inner })
}

#[pyfunction]
fn load(path: &str) -> PyResult<PyScenario> {
    let inner = load_scenario(path).map_err(to_py_err)?;
    Ok(PyScenario { inner })
}

#[pyfunction]
fn loads(text: &str) -> PyResult<PyScenario> {
    let inner = scenario_from_str(text).map_err(to_py_err)?;
    Ok(PyScenario { inner })
}

struct NormChoice {
    a: MonotoneNorm,
    b: MonotoneNorm,
}

fn norms(norm_a: &str, norm_b: Option<&str>, dim: usize) -> PyResult<NormChoice> {
    let kind_a: NormKind = norm_a.parse().map_err(to_py_err)?;
    let kind_b: NormKind = match norm_b {
        Some(s) => s.parse().map_err(to_py_err)?,
        None => kind_a,
    };
    Ok(NormChoice {
        a: MonotoneNorm::unit(kind_a, dim),
        b: MonotoneNorm::unit(kind_b, dim),
    })
}

fn solver_config(tol: f64, max_iter: usize) -> SolverConfig {
    SolverConfig {
        tolerance: tol,
        max_iterations: max_iter,
        ..SolverConfig::default()
    }
}

fn point_dict<'py>(py: Python<'py>, p: &PerformancePoint) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("p_bar", p.p_bar)?;
    d.set_item("utility", p.utility)?;
    d.set_item("power", p.power.as_slice().to_vec())?;
    d.set_item("energy_efficiency", p.energy_efficiency)?;
    d.set_item("utility_bound", p.utility_bound)?;
    d.set_item("ee_bound", p.ee_bound)?;
    d.set_item("regime", p.regime.to_string())?;
    d.set_item("iterations", p.iterations)?;
    d.set_item("residual", p.residual)?;
    Ok(d)
}

/// Solve one power budget; returns the performance point as a dict.
#[pyfunction]
#[pyo3(signature = (scenario, p_bar, norm_a="linf", norm_b=None, tol=1e-10,
    max_iter=100_000))]
fn solve<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    p_bar: f64,
    norm_a: &str,
    norm_b: Option<&str>,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mapping = build_mapping(&scenario.inner).map_err(to_py_err)?;
    let n = norms(norm_a, norm_b, mapping.dim())?;
    let problem = NumProblem {
        mapping,
        norm_a: n.a,
        norm_b: n.b,
        p_bar,
    };
    let point = solve_num(&problem, &solver_config(tol, max_iter)).map_err(to_py_err)?;
    point_dict(py, &point)
}

/// Sweep a log-spaced budget grid; returns asymptotic metadata plus one
/// dict per grid point.
#[pyfunction]
#[pyo3(signature = (scenario, p_bar_min, p_bar_max, points=25, norm_a="linf",
    norm_b=None, tol=1e-10, max_iter=100_000, warm_start=false, jobs=None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    p_bar_min: f64,
    p_bar_max: f64,
    points: usize,
    norm_a: &str,
    norm_b: Option<&str>,
    tol: f64,
    max_iter: usize,
    warm_start: bool,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mapping = build_mapping(&scenario.inner).map_err(to_py_err)?;
    let n = norms(norm_a, norm_b, mapping.dim())?;
    let grid = logspace(p_bar_min, p_bar_max, points).map_err(to_py_err)?;
    let opts = SweepOptions { warm_start, jobs };
    let result = run_sweep(
        &mapping,
        &n.a,
        &n.b,
        &grid,
        &solver_config(tol, max_iter),
        &opts,
    )
    .map_err(to_py_err)?;

    let d = PyDict::new(py);
    d.set_item("lambda_inf", result.asymptotic.lambda_inf)?;
    d.set_item("sup_utility", result.asymptotic.sup_utility)?;
    d.set_item("p_bar_t", result.asymptotic.transition_point)?;
    d.set_item("alpha", result.alpha)?;
    d.set_item("csv", result.to_csv())?;
    let rows: Vec<Bound<'py, PyDict>> = result
        .points
        .iter()
        .map(|p| point_dict(py, p))
        .collect::<PyResult<_>>()?;
    d.set_item("points", rows)?;
    Ok(d)
}

/// Asymptotic eigenvalue, utility limit, transition budget, and the
/// norm-equivalence constant used in the energy-efficiency bound.
#[pyfunction]
#[pyo3(signature = (scenario, norm_a="linf", norm_b=None, tol=1e-10,
    max_iter=100_000))]
fn bounds<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    norm_a: &str,
    norm_b: Option<&str>,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mapping = build_mapping(&scenario.inner).map_err(to_py_err)?;
    let n = norms(norm_a, norm_b, mapping.dim())?;
    let alpha = norm_equivalence_alpha(&n.a, &n.b).map_err(to_py_err)?;
    let sol =
        lambda_infinity(&mapping, &n.a, &solver_config(tol, max_iter)).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("lambda_inf", sol.lambda_inf)?;
    d.set_item("sup_utility", sol.sup_utility)?;
    d.set_item("p_bar_t", sol.transition_point)?;
    d.set_item("alpha", alpha)?;
    d.set_item("x_inf", sol.x_inf.as_slice().to_vec())?;
    Ok(d)
}

/// Sample-based check of the interference axioms; returns the report dict.
#[pyfunction]
#[pyo3(signature = (scenario, samples=10_000, seed=0))]
fn validate<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let mapping = build_mapping(&scenario.inner).map_err(to_py_err)?;
    let report =
        validate_interference_axioms(&mapping, samples, seed).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("samples", report.samples)?;
    d.set_item("seed", report.seed)?;
    d.set_item("passed", report.passed)?;
    match &report.failure {
        Some(f) => {
            let fd = PyDict::new(py);
            fd.set_item("axiom", format!("{:?}", f.axiom))?;
            fd.set_item("coordinate", f.coordinate)?;
            fd.set_item("x", f.x.clone())?;
            fd.set_item("alpha", f.alpha)?;
            fd.set_item("other", f.other.clone())?;
            d.set_item("failure", fd)?;
        }
        None => d.set_item("failure", py.None())?,
    }
    Ok(d)
}

#[pymodule]
fn condeig_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(loads, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
