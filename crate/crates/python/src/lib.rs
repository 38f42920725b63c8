use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hyperberge_core::bounds;
use hyperberge_core::canon::canonical_form;
use hyperberge_core::enumeration::{level_size as core_level_size, LevelSpec};
use hyperberge_core::io;
use hyperberge_core::spectral::{self, ThresholdVerdict};
use hyperberge_core::verify::{self, VerifyOptions};
use hyperberge_core::{berge, BergeCertificate, CertificateKind, Hypergraph};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts any serializable value to plain Python objects via `json`.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_kind(kind: &str) -> PyResult<CertificateKind> {
    match kind {
        "cycle" => Ok(CertificateKind::Cycle),
        "path" => Ok(CertificateKind::Path),
        other => Err(PyValueError::new_err(format!("kind must be 'cycle' or 'path', got {other:?}"))),
    }
}

#[pyclass(name = "Hypergraph", module = "hyperberge", frozen, eq)]
#[derive(PartialEq)]
struct PyHypergraph {
    inner: Hypergraph,
}

#[pymethods]
impl PyHypergraph {
    #[new]
    fn new(n: usize, r: usize, edges: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = Hypergraph::new(n, r, edges).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn empty(n: usize, r: usize) -> PyResult<Self> {
        Ok(PyHypergraph { inner: Hypergraph::empty(n, r).map_err(value_err)? })
    }

    #[staticmethod]
    fn complete(n: usize, r: usize) -> PyResult<Self> {
        Ok(PyHypergraph { inner: Hypergraph::complete(n, r).map_err(value_err)? })
    }

    #[staticmethod]
    fn clique_plus_isolated(n: usize, r: usize) -> PyResult<Self> {
        Ok(PyHypergraph { inner: Hypergraph::clique_plus_isolated(n, r).map_err(value_err)? })
    }

    #[staticmethod]
    fn clique_plus_pendant(n: usize, r: usize) -> PyResult<Self> {
        Ok(PyHypergraph { inner: Hypergraph::clique_plus_pendant(n, r).map_err(value_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, r, m, seed = 0))]
    fn random(n: usize, r: usize, m: usize, seed: u64) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyHypergraph { inner: Hypergraph::random(n, r, m, &mut rng).map_err(value_err)? })
    }

    /// Parses the text or JSON file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyHypergraph { inner: io::parse_any(text).map_err(value_err)? })
    }

    fn to_text(&self) -> String {
        io::to_text(&self.inner)
    }

    fn to_json(&self) -> String {
        io::to_json(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        self.inner.edge_lists()
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn min_degree(&self) -> usize {
        self.inner.min_degree()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.inner
            .components()
            .into_iter()
            .map(|c| (0..self.inner.n()).filter(|&v| c & (1u64 << v) != 0).collect())
            .collect()
    }

    fn with_edge(&self, edge: Vec<usize>) -> PyResult<Self> {
        let mut edges = self.inner.edge_lists();
        edges.push(edge);
        Self::new(self.inner.n(), self.inner.r(), edges)
    }

    /// Canonical code: equal codes iff isomorphic.
    fn canonical_code(&self) -> PyResult<Vec<u64>> {
        Ok(canonical_form(&self.inner).map_err(value_err)?.code)
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph(n={}, r={}, edges={:?})", self.inner.n(), self.inner.r(), self.inner.edge_lists())
    }
}

#[pyclass(name = "Certificate", module = "hyperberge", frozen)]
struct PyCertificate {
    inner: BergeCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCertificate { inner: serde_json::from_str(text).map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("plain data serializes")
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            CertificateKind::Cycle => "cycle",
            CertificateKind::Path => "path",
        }
    }

    #[getter]
    fn vertices(&self) -> Vec<usize> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        self.inner.edges.iter().map(|e| e.to_vec()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Certificate({})", self.to_json())
    }
}

fn wrap(cert: Option<BergeCertificate>) -> Option<PyCertificate> {
    cert.map(|inner| PyCertificate { inner })
}

#[pyfunction]
fn find_cycle(h: &PyHypergraph) -> Option<PyCertificate> {
    wrap(berge::find_hamiltonian_berge_cycle(&h.inner))
}

#[pyfunction]
#[pyo3(signature = (h, endpoints = None))]
fn find_path(h: &PyHypergraph, endpoints: Option<(usize, usize)>) -> PyResult<Option<PyCertificate>> {
    Ok(wrap(berge::find_hamiltonian_berge_path(&h.inner, endpoints).map_err(value_err)?))
}

#[pyfunction]
fn is_hamiltonian_connected(h: &PyHypergraph) -> bool {
    berge::is_hamiltonian_connected(&h.inner)
}

/// Violations as dicts; an empty list means the certificate is valid.
#[pyfunction]
fn verify_certificate<'py>(py: Python<'py>, h: &PyHypergraph, cert: &PyCertificate) -> PyResult<Bound<'py, PyAny>> {
    let violations = berge::verify_certificate(&h.inner, &cert.inner).err().unwrap_or_default();
    to_py(py, &violations)
}

#[pyfunction]
fn rotate_path_to_cycle(h: &PyHypergraph, path: &PyCertificate) -> PyResult<PyCertificate> {
    berge::rotate_path_to_cycle(&h.inner, &path.inner)
        .map(|inner| PyCertificate { inner })
        .map_err(value_err)
}

#[pyfunction]
fn brute_force_oracle(h: &PyHypergraph, kind: &str) -> PyResult<bool> {
    berge::brute_force_oracle(&h.inner, parse_kind(kind)?).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (h, tol = spectral::DEFAULT_TOL, max_iter = spectral::DEFAULT_MAX_ITER))]
fn spectral_radius<'py>(py: Python<'py>, h: &PyHypergraph, tol: f64, max_iter: usize) -> PyResult<Bound<'py, PyAny>> {
    let est = spectral::spectral_radius(&h.inner, tol, max_iter).map_err(value_err)?;
    to_py(py, &est)
}

#[pyfunction]
fn evaluate_form(h: &PyHypergraph, x: Vec<f64>) -> PyResult<f64> {
    spectral::evaluate_form(&h.inner, &x).map_err(value_err)
}

#[pyfunction]
fn gradient_form(h: &PyHypergraph, x: Vec<f64>) -> PyResult<Vec<f64>> {
    spectral::gradient_form(&h.inner, &x).map_err(value_err)
}

/// One of "certified_above", "certified_below_or_equal", "undecided".
#[pyfunction]
#[pyo3(signature = (h, t, tol = spectral::DEFAULT_TOL))]
fn exceeds_threshold(h: &PyHypergraph, t: f64, tol: f64) -> PyResult<&'static str> {
    Ok(match spectral::exceeds_threshold(&h.inner, t, tol).map_err(value_err)? {
        ThresholdVerdict::CertifiedAbove => "certified_above",
        ThresholdVerdict::CertifiedBelowOrEqual => "certified_below_or_equal",
        ThresholdVerdict::Undecided => "undecided",
    })
}

#[pyfunction]
fn binom(a: u64, b: u64) -> PyResult<u128> {
    bounds::binom(a, b).map_err(value_err)
}

#[pyfunction]
fn p(r: u32, x: f64) -> f64 {
    bounds::p(r, x)
}

#[pyfunction]
fn p_inverse(r: u32, y: f64) -> f64 {
    bounds::p_inverse(r, y)
}

#[pyfunction]
fn bai_lu_bound(r: u32, m: u64) -> PyResult<f64> {
    if r < 2 {
        return Err(PyValueError::new_err("r must be at least 2"));
    }
    Ok(bounds::bai_lu_bound(r, m))
}

#[pyfunction]
fn threshold(name: &str, n: u64, r: u64) -> PyResult<u128> {
    let which = bounds::ThresholdName::ALL
        .into_iter()
        .find(|t| t.as_str() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown threshold {name:?}")))?;
    Ok(bounds::threshold(which, n, r).map_err(value_err)?.value)
}

#[pyfunction]
fn check_convexity_chain<'py>(py: Python<'py>, n: u64, r: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::check_convexity_chain(n, r).map_err(value_err)?)
}

#[pyfunction]
fn level_size(n: usize, r: usize, m: usize) -> PyResult<u128> {
    core_level_size(&LevelSpec::all_labeled(n, r, m)).map_err(value_err)
}

fn options(jobs: usize) -> PyResult<VerifyOptions> {
    if jobs == 0 {
        return Err(PyValueError::new_err("jobs must be at least 1"));
    }
    Ok(VerifyOptions { jobs, ..Default::default() })
}

#[pyfunction]
#[pyo3(signature = (n, jobs = 1))]
fn verify_lemma<'py>(py: Python<'py>, n: usize, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(jobs)?;
    let report = py
        .detach(|| verify::verify_lemma_r_plus_2(n, &opts, &mut |_| {}))
        .map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (n, r, jobs = 1))]
fn verify_edges<'py>(py: Python<'py>, n: usize, r: usize, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(jobs)?;
    let report = py
        .detach(|| verify::verify_edge_theorem(n, r, &opts, &mut |_| {}))
        .map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (n, r, samples = 1000, seed = 0, jobs = 1))]
fn verify_spectral<'py>(py: Python<'py>, n: usize, r: usize, samples: u64, seed: u64, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(jobs)?;
    let report = py
        .detach(|| verify::verify_spectral_theorem(n, r, samples, seed, &opts, &mut |_| {}))
        .map_err(value_err)?;
    to_py(py, &report)
}

#[pymodule]
fn hyperberge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(find_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(find_path, m)?)?;
    m.add_function(wrap_pyfunction!(is_hamiltonian_connected, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_path_to_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_form, m)?)?;
    m.add_function(wrap_pyfunction!(gradient_form, m)?)?;
    m.add_function(wrap_pyfunction!(exceeds_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(p, m)?)?;
    m.add_function(wrap_pyfunction!(p_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(bai_lu_bound, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(check_convexity_chain, m)?)?;
    m.add_function(wrap_pyfunction!(level_size, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(verify_edges, m)?)?;
    m.add_function(wrap_pyfunction!(verify_spectral, m)?)?;
    Ok(())
}
