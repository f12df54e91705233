//! Python bindings: quaternions, quaternionic functions, the operator and
//! the analysis routines. Reports are returned as plain dicts.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyZeroDivisionError};
use pyo3::prelude::*;
use qfc_core::fueter::{self, Domain, OrderKind, SystemName, DEFAULT_MASK_THRESHOLD, DEFAULT_TOL};
use qfc_core::suite::{run_suite, SuiteConfig};
use qfc_core::{inverse_qf, product_qf, sum_qf, Point4, QfcError};
use serde::Serialize;

create_exception!(qfc, AnalysisError, PyException, "Raised when an analysis cannot be carried out.");

fn err(e: QfcError) -> PyErr {
    match e {
        QfcError::Singular(_) | QfcError::ZeroQuaternion => PyZeroDivisionError::new_err(e.to_string()),
        _ => AnalysisError::new_err(e.to_string()),
    }
}

fn to_dict<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| AnalysisError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn point(p: (f64, f64, f64, f64)) -> Point4 {
    Point4::from_coords([p.0, p.1, p.2, p.3])
}

fn domain(bounds: Option<[f64; 8]>, mask: f64) -> PyResult<Domain> {
    let b = bounds.unwrap_or_else(|| Domain::default().bounds());
    Domain::from_bounds(b, mask).map_err(err)
}

/// `z1 + z2 j` with complex `z1`, `z2`.
#[pyclass(name = "Quaternion", module = "qfc", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyQuaternion(qfc_core::Quaternion);

#[pymethods]
impl PyQuaternion {
    #[new]
    #[pyo3(signature = (z1, z2 = Complex64::new(0.0, 0.0)))]
    fn new(z1: Complex64, z2: Complex64) -> Self {
        PyQuaternion(qfc_core::Quaternion::new(z1, z2))
    }

    #[getter]
    fn z1(&self) -> Complex64 {
        self.0.z1
    }

    #[getter]
    fn z2(&self) -> Complex64 {
        self.0.z2
    }

    fn conj(&self) -> Self {
        PyQuaternion(self.0.conj())
    }

    fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    fn modulus(&self) -> f64 {
        self.0.modulus()
    }

    fn rinv(&self) -> PyResult<Self> {
        self.0.rinv().map(PyQuaternion).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 * other.0)
    }

    fn __add__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 - other.0)
    }

    fn __neg__(&self) -> Self {
        PyQuaternion(-self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Quaternion({})", self.0)
    }
}

/// A quaternion-valued function `f1 + f2 j` of `(z1, z2)`.
#[pyclass(name = "QFunction", module = "qfc", frozen, from_py_object)]
#[derive(Clone)]
struct PyQFunction(qfc_core::QFunction);

#[pymethods]
impl PyQFunction {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        qfc_core::QFunction::parse(text).map(PyQFunction).map_err(err)
    }

    /// The two complex components as expression text.
    #[getter]
    fn components(&self) -> (String, String) {
        (self.0.f1.to_string(), self.0.f2.to_string())
    }

    fn eval(&self, at: (f64, f64, f64, f64)) -> PyResult<PyQuaternion> {
        self.0.eval(&point(at)).map(PyQuaternion).map_err(err)
    }

    fn inverse(&self) -> Self {
        PyQFunction(inverse_qf(&self.0))
    }

    fn conj(&self) -> Self {
        PyQFunction(self.0.conj())
    }

    fn scale(&self, alpha: f64) -> Self {
        PyQFunction(self.0.scale(alpha))
    }

    /// `f * q` for a constant quaternion `q`.
    fn mul_right(&self, q: &PyQuaternion) -> Self {
        PyQFunction(self.0.mul_right(q.0))
    }

    fn __add__(&self, other: &Self) -> Self {
        PyQFunction(sum_qf(&self.0, &other.0))
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyQFunction(self.0.sub(&other.0))
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyQFunction(product_qf(&self.0, &other.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QFunction({:?})", self.0.to_string())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyQFunction> {
    PyQFunction::new(text)
}

/// `D f` at a point, `1/2 (d/dz1bar + j d/dz2bar) f`.
#[pyfunction]
fn cauchy_fueter(f: &PyQFunction, at: (f64, f64, f64, f64)) -> PyResult<PyQuaternion> {
    fueter::cauchy_fueter(&f.0, &point(at)).map(|d| PyQuaternion(d.value)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, grid = 6, tol = DEFAULT_TOL, bounds = None, mask = DEFAULT_MASK_THRESHOLD, witnesses = Vec::new()))]
fn classify(
    py: Python<'_>,
    f: &PyQFunction,
    grid: usize,
    tol: f64,
    bounds: Option<[f64; 8]>,
    mask: f64,
    witnesses: Vec<PyQFunction>,
) -> PyResult<Py<PyAny>> {
    let d = domain(bounds, mask)?;
    let w: Vec<_> = witnesses.into_iter().map(|w| w.0).collect();
    let c = py.detach(|| fueter::classify_with_witnesses(&f.0, &w, &d, grid, tol)).map_err(err)?;
    to_dict(py, &c)
}

#[pyfunction]
#[pyo3(signature = (system, f, g = None, grid = 6, tol = DEFAULT_TOL, bounds = None, mask = DEFAULT_MASK_THRESHOLD))]
fn residuals(
    py: Python<'_>,
    system: &str,
    f: &PyQFunction,
    g: Option<&PyQFunction>,
    grid: usize,
    tol: f64,
    bounds: Option<[f64; 8]>,
    mask: f64,
) -> PyResult<Py<PyAny>> {
    let sys = SystemName::from_name(system).ok_or_else(|| AnalysisError::new_err(format!("unknown system {system:?}")))?;
    let d = domain(bounds, mask)?;
    let g = g.map(|g| &g.0);
    let r = py.detach(|| fueter::residual_report(sys, &f.0, g, &d, grid, tol)).map_err(err)?;
    to_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (f, at = (0.0, 0.0, 0.0, 0.0), kind = "zero"))]
fn estimate_order(py: Python<'_>, f: &PyQFunction, at: (f64, f64, f64, f64), kind: &str) -> PyResult<Py<PyAny>> {
    let kind = match kind {
        "zero" => OrderKind::Zero,
        "pole" => OrderKind::Pole,
        _ => return Err(AnalysisError::new_err("kind must be 'zero' or 'pole'")),
    };
    let e = fueter::estimate_order(&f.0, &point(at), kind).map_err(err)?;
    to_dict(py, &e)
}

#[pyfunction]
#[pyo3(signature = (f, grid = 9, tol = None, bounds = None))]
fn zero_set(py: Python<'_>, f: &PyQFunction, grid: usize, tol: Option<f64>, bounds: Option<[f64; 8]>) -> PyResult<Py<PyAny>> {
    let d = domain(bounds, DEFAULT_MASK_THRESHOLD)?;
    let tol = tol.unwrap_or_else(|| d.spacing(grid).into_iter().fold(0.0, f64::max));
    let z = py.detach(|| fueter::zero_set_scan(&f.0, &d, grid, tol)).map_err(err)?;
    to_dict(py, &z)
}

/// Runs the built-in verification suite.
#[pyfunction]
#[pyo3(signature = (seed = 0, tol = DEFAULT_TOL, grid = 6))]
fn verify(py: Python<'_>, seed: u64, tol: f64, grid: usize) -> PyResult<Py<PyAny>> {
    let cfg = SuiteConfig { seed, tol, grid_n: grid, ..SuiteConfig::default() };
    let r = py.detach(|| run_suite(&cfg)).map_err(err)?;
    to_dict(py, &r)
}

#[pymodule]
fn qfc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AnalysisError", m.py().get_type::<AnalysisError>())?;
    m.add_class::<PyQuaternion>()?;
    m.add_class::<PyQFunction>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_fueter, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(residuals, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_order, m)?)?;
    m.add_function(wrap_pyfunction!(zero_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
