//! Python bindings. Reports are handed over as plain dicts (via JSON).

use std::collections::HashMap;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ratblow::construction::verify::{verify_paper as verify, VerifyOptions};
use ratblow::format::{run_document, ConstructionDoc};
use ratblow::hj::{self, HjChain, HjFraction, WahlParams};
use ratblow::surface::{CenterSpec, MarkedSurface};
use ratblow::zlinalg::{self, IntMatrix};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chain(weights: Vec<i64>) -> PyResult<HjChain> {
    HjChain::new(weights).map_err(value_error)
}

fn matrix(rows: Vec<Vec<i64>>) -> PyResult<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(cols, &rows).map_err(value_error)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// `[b1, ..., bk]` with `p/q = b1 - 1/(b2 - ...)`.
#[pyfunction]
fn hj_expand(p: i64, q: i64) -> PyResult<Vec<i64>> {
    let f = HjFraction::new(p, q).map_err(value_error)?;
    Ok(hj::hj_expand(f).coefficients().to_vec())
}

#[pyfunction]
fn hj_value(weights: Vec<i64>) -> PyResult<(i64, i64)> {
    let f = hj::hj_value(&chain(weights)?).map_err(value_error)?;
    Ok((f.p, f.q))
}

#[pyfunction]
fn wahl_chain(n: i64, a: i64) -> PyResult<Vec<i64>> {
    let w = WahlParams::new(n, a).map_err(value_error)?;
    Ok(hj::wahl_chain(w).map_err(value_error)?.coefficients().to_vec())
}

/// `(n, a)` when the string is the chain of `n^2/(na - 1)`, else `None`.
#[pyfunction]
fn recognize_wahl(weights: Vec<i64>) -> PyResult<Option<(i64, i64)>> {
    Ok(hj::recognize_wahl(&chain(weights)?).map(|w| (w.n, w.a)))
}

/// `(coefficients, order)` of the meridians against the first curve.
#[pyfunction]
fn meridians(weights: Vec<i64>) -> PyResult<(Vec<i64>, i64)> {
    let m = hj::meridian_coefficients(&chain(weights)?).map_err(value_error)?;
    Ok((m.coefficients, m.order))
}

/// `(plumbing side, complement side)` lens spaces as strings.
#[pyfunction]
fn lens_boundary(weights: Vec<i64>) -> PyResult<(String, String)> {
    let b = hj::lens_boundary(&chain(weights)?).map_err(value_error)?;
    Ok((b.plumbing.to_string(), b.complement.to_string()))
}

/// `(D, U, V)` with `U M V = D`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn snf(rows: Vec<Vec<i64>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let r = zlinalg::snf(&matrix(rows)?);
    Ok((r.d.to_nested(), r.u.to_nested(), r.v.to_nested()))
}

/// Cokernel of the row relations, e.g. `"Z/2"` or `"Z^1 + Z/3"`.
#[pyfunction]
fn cokernel(rows: Vec<Vec<i64>>) -> PyResult<String> {
    Ok(zlinalg::cokernel(&matrix(rows)?).to_string())
}

#[pyfunction]
fn determinant(rows: Vec<Vec<i64>>) -> PyResult<BigInt> {
    zlinalg::determinant(&matrix(rows)?).map_err(value_error)
}

/// The full check, as the dict `verify-paper --emit json` prints.
#[pyfunction]
#[pyo3(signature = (all_solutions = false, assignment = None))]
fn verify_paper<'py>(py: Python<'py>, all_solutions: bool, assignment: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let assignment = assignment.map(ConstructionDoc::from_json).transpose().map_err(value_error)?;
    let report = py.detach(|| verify(&VerifyOptions { assignment, all_solutions }));
    json_to_py(py, &report.to_json())
}

/// Builds a construction document (JSON text) and returns its report.
#[pyfunction]
fn run_construction<'py>(py: Python<'py>, document: &str) -> PyResult<Bound<'py, PyAny>> {
    let doc = ConstructionDoc::from_json(document).map_err(value_error)?;
    let run = run_document(&doc).map_err(value_error)?;
    json_to_py(py, &serde_json::to_string(&run.report).map_err(value_error)?)
}

/// A blown-up plane with named curves. Methods that change the surface
/// return a new `Surface`.
#[pyclass(frozen)]
struct Surface {
    inner: MarkedSurface,
}

#[pymethods]
impl Surface {
    #[new]
    fn new() -> Self {
        Surface { inner: MarkedSurface::projective_plane() }
    }

    fn add_plane_curve(&self, name: &str, degree: i64) -> PyResult<Surface> {
        Ok(Surface { inner: self.inner.add_plane_curve(name, degree).map_err(value_error)? })
    }

    /// `class` maps basis labels (`"H"`, exceptional labels) to coefficients.
    #[pyo3(signature = (name, class, budget = 0))]
    fn add_class_curve(&self, name: &str, class: HashMap<String, i64>, budget: u32) -> PyResult<Surface> {
        let c = self.inner.class_from_terms(class.iter().map(|(k, v)| (k.as_str(), *v))).map_err(value_error)?;
        Ok(Surface { inner: self.inner.add_class_curve(name, c, budget).map_err(value_error)? })
    }

    #[pyo3(signature = (label, on = Vec::new(), node_of = None))]
    fn blow_up(&self, label: &str, on: Vec<String>, node_of: Option<String>) -> PyResult<Surface> {
        let c = CenterSpec { label: label.to_string(), simple_on: on, node_of };
        Ok(Surface { inner: self.inner.blow_up(&c).map_err(value_error)? })
    }

    fn pair(&self, a: &str, b: &str) -> PyResult<i64> {
        self.inner.pair(a, b).map_err(value_error)
    }

    fn self_int(&self, c: &str) -> PyResult<i64> {
        self.inner.self_int(c).map_err(value_error)
    }

    fn genus(&self, c: &str) -> PyResult<i64> {
        self.inner.genus_a(c).map_err(value_error)
    }

    fn curve_class(&self, c: &str) -> PyResult<Vec<i64>> {
        Ok(self.inner.curve(c).map_err(value_error)?.class.coefficients().to_vec())
    }

    fn curves(&self) -> Vec<String> {
        self.inner.curve_names().map(str::to_string).collect()
    }

    fn basis(&self) -> Vec<String> {
        self.inner.basis_labels()
    }

    /// `{"blowups", "euler", "signature", "b2", "k2"}`.
    fn invariants(&self) -> HashMap<&'static str, i64> {
        let i = self.inner.invariants();
        HashMap::from([
            ("blowups", i.blowups as i64),
            ("euler", i.euler),
            ("signature", i.signature),
            ("b2", i.b2),
            ("k2", i.k2),
        ])
    }

    fn __repr__(&self) -> String {
        format!("Surface(blowups={}, curves={:?})", self.inner.n_blowups(), self.curves())
    }
}

#[pymodule]
#[pyo3(name = "ratblow")]
fn ratblow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hj_expand, m)?)?;
    m.add_function(wrap_pyfunction!(hj_value, m)?)?;
    m.add_function(wrap_pyfunction!(wahl_chain, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_wahl, m)?)?;
    m.add_function(wrap_pyfunction!(meridians, m)?)?;
    m.add_function(wrap_pyfunction!(lens_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(cokernel, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    m.add_function(wrap_pyfunction!(run_construction, m)?)?;
    m.add_class::<Surface>()?;
    Ok(())
}
