//! Python bindings. Triangulations and reports cross the boundary as JSON
//! strings, the same format the command line reads and writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spantri_core::construct::{auto_construct, construct};
use spantri_core::sim::estimate::estimate_containment_prob;
use spantri_core::sim::gnp::sample_gnp;
use spantri_core::sim::lowerbound::lower_bound_certificate;
use spantri_core::sim::threshold::estimate_threshold;
use spantri_core::spread::check_extension_bounds;
use spantri_core::verify::{run_suite, Suite};
use spantri_core::{Error, Triangulation};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Structural(_) | Error::Construction(_) | Error::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn load(json: &str) -> PyResult<Triangulation> {
    Triangulation::from_json(json).map_err(py_err)
}

/// Triangulation JSON for `(n, k)`; `regime` is "auto" or a constructor name.
#[pyfunction]
#[pyo3(signature = (n, k, regime = "auto"))]
fn build(n: usize, k: usize, regime: &str) -> PyResult<String> {
    let t = if regime == "auto" {
        auto_construct(n, k)
    } else {
        regime.parse().and_then(|r| construct(n, k, r))
    };
    Ok(t.map_err(py_err)?.to_json())
}

/// Validation report JSON.
#[pyfunction]
fn validate(triangulation: &str) -> PyResult<String> {
    let rep = spantri_core::validate(&load(triangulation)?).map_err(py_err)?;
    serde_json::to_string_pretty(&rep).map_err(|e| py_err(e.into()))
}

#[pyfunction]
fn faces(triangulation: &str) -> PyResult<Vec<Vec<u32>>> {
    spantri_core::faces(&load(triangulation)?).map_err(py_err)
}

/// Verification report JSON for one suite.
#[pyfunction]
#[pyo3(signature = (triangulation, suite, max_edges = 12, budget = u64::MAX))]
fn verify(py: Python<'_>, triangulation: &str, suite: &str, max_edges: usize, budget: u64) -> PyResult<String> {
    let t = load(triangulation)?;
    let suite: Suite = suite.parse().map_err(py_err)?;
    let rep = py.detach(|| run_suite(&t, suite, max_edges, budget)).map_err(py_err)?;
    Ok(rep.to_json())
}

/// Extension-bound report JSON from the exact copy oracle (n <= 10).
#[pyfunction]
#[pyo3(signature = (triangulation, max_edges = 6))]
fn spread_bounds(py: Python<'_>, triangulation: &str, max_edges: usize) -> PyResult<String> {
    let t = load(triangulation)?;
    Ok(py.detach(|| check_extension_bounds(&t, max_edges)).map_err(py_err)?.to_json())
}

/// Edges of `G(n, p)` drawn from `seed`.
#[pyfunction]
fn gnp_edges(n: usize, p: f64, seed: u64) -> PyResult<Vec<(usize, usize)>> {
    let g = sample_gnp(n, p, seed).map_err(py_err)?;
    Ok((0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| g.has_edge(a, b)).collect())
}

#[pyfunction]
fn containment(py: Python<'_>, n: usize, k: usize, p: f64, trials: u64, seed: u64) -> PyResult<String> {
    let e = py.detach(|| estimate_containment_prob(n, k, p, trials, seed)).map_err(py_err)?;
    serde_json::to_string_pretty(&e).map_err(|e| py_err(e.into()))
}

#[pyfunction]
#[pyo3(signature = (n, k, trials = 500, tol = 0.01, seed = 20240601))]
fn threshold(py: Python<'_>, n: usize, k: usize, trials: u64, tol: f64, seed: u64) -> PyResult<String> {
    Ok(py.detach(|| estimate_threshold(n, k, trials, tol, seed)).map_err(py_err)?.to_json())
}

#[pyfunction]
fn lower_bound(n: usize, k: usize) -> PyResult<String> {
    Ok(lower_bound_certificate(n, k).map_err(py_err)?.to_json())
}

#[pymodule]
fn spantri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(faces, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(spread_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(gnp_edges, m)?)?;
    m.add_function(wrap_pyfunction!(containment, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    Ok(())
}
