//! Python bindings for the `spt_core` simulator.

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use spt_core::aklt::{self, StringForm, StringOrderSpec};
use spt_core::cluster::{self, ClusterMode, EdgeDressing, FidelityMethod};
use spt_core::harness::{self, ExperimentConfig, OutputFormat};
use spt_core::linalg::trace_distance;
use spt_core::mps::{self, Ancilla};
use spt_core::register::{LevelPair, QuditRegister};
use spt_core::rng::RngStream;
use spt_core::tomography::{self as tomo, MleOptions};
use spt_core::SimError;

fn to_py(e: SimError) -> PyErr {
    match e {
        SimError::Io(m) => PyOSError::new_err(m),
        SimError::DegenerateBoundary | SimError::DegenerateProjection(_) => PyRuntimeError::new_err(e.to_string()),
        SimError::InvalidArgument(_) | SimError::Config(_) => PyValueError::new_err(e.to_string()),
    }
}

trait PyResultExt<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> PyResultExt<T> for spt_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn ancilla(s: &str) -> PyResult<Ancilla> {
    Ancilla::parse(s).ok_or_else(|| PyValueError::new_err(format!("unknown ancilla state {s:?}")))
}

fn axis(s: &str) -> PyResult<usize> {
    match s {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        _ => Err(PyValueError::new_err(format!("unknown axis {s:?}"))),
    }
}

fn format_of(s: &str) -> PyResult<OutputFormat> {
    OutputFormat::parse(s).ok_or_else(|| PyValueError::new_err(format!("unknown format {s:?}")))
}

/// Mixed-radix state vector.
#[pyclass(name = "Register", skip_from_py_object)]
struct PyRegister {
    inner: QuditRegister,
}

#[pymethods]
impl PyRegister {
    #[new]
    #[pyo3(signature = (dims, levels=None))]
    fn new(dims: Vec<usize>, levels: Option<Vec<usize>>) -> PyResult<Self> {
        let levels = levels.unwrap_or_else(|| vec![0; dims.len()]);
        Ok(Self { inner: QuditRegister::product_state(&dims, &levels).py()? })
    }

    #[staticmethod]
    fn from_amplitudes(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self { inner: QuditRegister::from_amplitudes(&dims, amplitudes).py()? })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn fidelity(&self, other: &PyRegister) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).py()
    }

    fn rotate(&mut self, site: usize, a: usize, b: usize, theta: f64, phi: f64) -> PyResult<()> {
        self.inner.rotate(LevelPair::new(site, a, b), theta, phi).py()
    }

    fn rotate_z(&mut self, site: usize, a: usize, b: usize, theta: f64) -> PyResult<()> {
        self.inner.rotate_z(LevelPair::new(site, a, b), theta).py()
    }

    #[pyo3(signature = (site1, site2, theta, phi, levels1=(0, 1), levels2=(0, 1)))]
    fn ms(&mut self, site1: usize, site2: usize, theta: f64, phi: f64, levels1: (usize, usize), levels2: (usize, usize)) -> PyResult<()> {
        self.inner
            .ms(LevelPair::new(site1, levels1.0, levels1.1), LevelPair::new(site2, levels2.0, levels2.1), theta, phi)
            .py()
    }

    fn measure(&mut self, site: usize, seed: u64) -> PyResult<usize> {
        self.inner.measure(site, &mut RngStream::new(seed)).py()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Register(dims={:?})", self.inner.dims())
    }
}

fn wrap(inner: QuditRegister) -> PyRegister {
    PyRegister { inner }
}

#[pyfunction]
#[pyo3(signature = (n, init="up", outcome="up"))]
fn aklt_state(n: usize, init: &str, outcome: &str) -> PyResult<PyRegister> {
    Ok(wrap(mps::aklt_state(n, ancilla(init)?, ancilla(outcome)?).py()?))
}

#[pyfunction]
fn aklt_energy(state: &PyRegister) -> PyResult<f64> {
    aklt::energy_exact(&state.inner).py()
}

/// Nine-setting estimate as `(value, standard_error)`.
#[pyfunction]
#[pyo3(signature = (state, shots, seed=0))]
fn aklt_energy_sampled(state: &PyRegister, shots: usize, seed: u64) -> PyResult<(f64, f64)> {
    let r = aklt::energy_nine_settings(&state.inner, shots, &RngStream::new(seed)).py()?;
    Ok((r.value, r.error))
}

#[pyfunction]
fn local_order(state: &PyRegister) -> PyResult<Vec<[f64; 3]>> {
    aklt::local_order(&state.inner).py()
}

#[pyfunction]
fn correlations(state: &PyRegister, i: usize, j: usize) -> PyResult<[[f64; 3]; 3]> {
    Ok(aklt::two_spin_correlations(&state.inner, i, j).py()?.table)
}

#[pyfunction]
#[pyo3(signature = (state, axis="z", form="sum"))]
fn string_order(state: &PyRegister, axis: &str, form: &str) -> PyResult<f64> {
    let form = match form {
        "sum" => StringForm::Sum,
        "product" => StringForm::Product,
        _ => return Err(PyValueError::new_err(format!("unknown string form {form:?}"))),
    };
    aklt::string_order(&state.inner, StringOrderSpec { axis: self::axis(axis)?, form }).py()
}

#[pyfunction]
#[pyo3(signature = (n, mode="cz-ladder", left=1, right=1))]
fn cluster_state(n: usize, mode: &str, left: i8, right: i8) -> PyResult<PyRegister> {
    let mode = ClusterMode::parse(mode).ok_or_else(|| PyValueError::new_err(format!("unknown cluster mode {mode:?}")))?;
    Ok(wrap(cluster::prepare_cluster(n, mode, EdgeDressing::new(left, right).py()?).py()?))
}

#[pyfunction]
fn stabilizer_fidelity(state: &PyRegister) -> PyResult<f64> {
    Ok(cluster::stabilizer_fidelity(&state.inner, EdgeDressing::PLUS, FidelityMethod::Exhaustive, &RngStream::new(0)).py()?.value)
}

/// Rows of `(operator, bulk_mean, left, right)`.
#[pyfunction]
fn bulk_edge_table(state: &PyRegister) -> PyResult<Vec<(String, f64, f64, f64)>> {
    Ok(cluster::bulk_edge_table(&state.inner).py()?.into_iter().map(|r| (r.operator, r.bulk_mean, r.left, r.right)).collect())
}

#[pyfunction]
fn bell_projection<'py>(py: Python<'py>, state: &PyRegister, bulk_outcome: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    let b = cluster::project_bulk_edge_bell(&state.inner, &bulk_outcome).py()?;
    let d = PyDict::new(py);
    d.set_item("label", b.label)?;
    d.set_item("fidelity", b.fidelity)?;
    d.set_item("probability", b.probability)?;
    d.set_item("entropy", b.entropy)?;
    Ok(d)
}

/// Simulated MUB tomography; `shots=None` uses exact probabilities.
#[pyfunction]
#[pyo3(signature = (state, shots=None, seed=0))]
fn tomography<'py>(py: Python<'py>, state: &PyRegister, shots: Option<usize>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let records = tomo::simulate_tomography(&state.inner, shots, &RngStream::new(seed)).py()?;
    let target = tomo::pure_density(&state.inner);
    let li = tomo::reconstruct_linear(&records).py()?;
    let mle = tomo::reconstruct_mle(&records, MleOptions::default()).py()?;
    let d = PyDict::new(py);
    d.set_item("li_trace_distance", trace_distance(&li, &target))?;
    d.set_item("li_fidelity", tomo::fidelity(&li, &state.inner).py()?)?;
    d.set_item("mle_trace_distance", trace_distance(&mle.rho, &target))?;
    d.set_item("mle_fidelity", tomo::fidelity(&mle.rho, &state.inner).py()?)?;
    d.set_item("mle_iterations", mle.iterations)?;
    Ok(d)
}

/// Run a `key = value` experiment config and return the rendered output.
#[pyfunction]
#[pyo3(signature = (config, format="table"))]
fn run_config(config: &str, format: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::parse(config).py()?;
    Ok(harness::render(&harness::run(&cfg).py()?, format_of(format)?))
}

/// Run a config and write the output file into `out_dir`, returning its path.
#[pyfunction]
#[pyo3(signature = (config, out_dir, format="table"))]
fn run_to_file(config: &str, out_dir: &str, format: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::parse(config).py()?;
    let out = harness::run(&cfg).py()?;
    Ok(harness::emit_results(&out, format_of(format)?, std::path::Path::new(out_dir)).py()?.display().to_string())
}

#[pyfunction]
fn config_hash(config: &str) -> PyResult<String> {
    Ok(ExperimentConfig::parse(config).py()?.hash())
}

#[pymodule]
fn spt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyRegister>()?;
    m.add_function(wrap_pyfunction!(aklt_state, m)?)?;
    m.add_function(wrap_pyfunction!(aklt_energy, m)?)?;
    m.add_function(wrap_pyfunction!(aklt_energy_sampled, m)?)?;
    m.add_function(wrap_pyfunction!(local_order, m)?)?;
    m.add_function(wrap_pyfunction!(correlations, m)?)?;
    m.add_function(wrap_pyfunction!(string_order, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_state, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(bulk_edge_table, m)?)?;
    m.add_function(wrap_pyfunction!(bell_projection, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_to_file, m)?)?;
    m.add_function(wrap_pyfunction!(config_hash, m)?)?;
    Ok(())
}
