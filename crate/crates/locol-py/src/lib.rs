//! Python bindings for the LO-colouring solvers.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use locol::{hypergraph, instances, mod2, rational};

#[pyclass(frozen, name = "Hypergraph")]
struct PyHypergraph {
    inner: hypergraph::Hypergraph,
}

#[pymethods]
impl PyHypergraph {
    /// Build from a vertex count and a list of 3-vertex edges.
    #[new]
    fn new(n: usize, edges: Vec<Vec<u32>>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(hypergraph::Edge::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_value_err)?;
        let inner = hypergraph::Hypergraph::new(n, edges, true).map_err(to_value_err)?;
        Ok(PyHypergraph { inner })
    }

    /// Parse the `p lo3` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyHypergraph {
            inner: hypergraph::parse_hypergraph(text).map_err(to_value_err)?,
        })
    }

    fn to_text(&self) -> String {
        hypergraph::serialize_hypergraph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<u32>> {
        self.inner
            .edges()
            .iter()
            .map(|e| e.vertices().to_vec())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

fn colouring_to_dict(c: &hypergraph::Colouring) -> HashMap<u32, u32> {
    c.iter()
        .filter_map(|(v, col)| col.map(|col| (v, col)))
        .collect()
}

fn dict_to_colouring(n: usize, d: HashMap<u32, u32>) -> PyResult<hypergraph::Colouring> {
    let mut c = hypergraph::Colouring::uncoloured(n);
    for (v, col) in d {
        if v == 0 || v as usize > n {
            return Err(PyValueError::new_err(format!("vertex {v} outside 1..={n}")));
        }
        c.set(v, col);
    }
    Ok(c)
}

fn to_value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Check an LO colouring; returns (valid, violations, colours_used).
#[pyfunction]
fn verify_lo_colouring(
    h: &PyHypergraph,
    colouring: HashMap<u32, u32>,
) -> PyResult<(bool, Vec<(usize, String)>, usize)> {
    let c = dict_to_colouring(h.inner.n(), colouring)?;
    let rep = hypergraph::verify_lo_colouring(&h.inner, &c);
    Ok((
        rep.valid,
        rep.violations
            .iter()
            .map(|(e, w)| (*e, format!("{w:?}")))
            .collect(),
        rep.colours_used,
    ))
}

#[pyclass(frozen, name = "SolveReport")]
struct PySolveReport {
    #[pyo3(get)]
    colouring: HashMap<u32, u32>,
    #[pyo3(get)]
    colours_used: usize,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    retries: usize,
    #[pyo3(get)]
    elapsed_ms: f64,
}

/// Vertex-halving solver: at most log2(n) colours on LO 2-colourable input.
#[pyfunction]
#[pyo3(signature = (h, brute_threshold = mod2::DEFAULT_BRUTE_THRESHOLD))]
fn solve_mod2(h: &PyHypergraph, brute_threshold: usize) -> PyResult<PySolveReport> {
    let rep = mod2::solve_mod2(&h.inner, brute_threshold).map_err(to_runtime_err)?;
    Ok(PySolveReport {
        colouring: colouring_to_dict(&rep.colouring),
        colours_used: rep.colours_used,
        iterations: rep.iterations,
        retries: 0,
        elapsed_ms: rep.elapsed.as_secs_f64() * 1e3,
    })
}

/// Edge-quartering variant: at most 2 + log2(m)/2 colours.
#[pyfunction]
fn solve_mod2_edges(h: &PyHypergraph) -> PyResult<PySolveReport> {
    let rep = mod2::solve_mod2_edges(&h.inner).map_err(to_runtime_err)?;
    Ok(PySolveReport {
        colouring: colouring_to_dict(&rep.colouring),
        colours_used: rep.colours_used,
        iterations: rep.iterations,
        retries: 0,
        elapsed_ms: rep.elapsed.as_secs_f64() * 1e3,
    })
}

/// Exact-rational solver (needs n >= 8).
#[pyfunction]
#[pyo3(signature = (h, seed = 0, max_retries = 64))]
fn solve_rational(h: &PyHypergraph, seed: u64, max_retries: usize) -> PyResult<PySolveReport> {
    let rep = rational::solve_rational(&h.inner, seed, max_retries).map_err(to_runtime_err)?;
    Ok(PySolveReport {
        colouring: colouring_to_dict(&rep.colouring),
        colours_used: rep.colours_used,
        iterations: 0,
        retries: rep.retries,
        elapsed_ms: rep.elapsed.as_secs_f64() * 1e3,
    })
}

/// Planted LO 2-colourable instance; returns (hypergraph, witness dict).
#[pyfunction]
#[pyo3(signature = (n, m, ones_fraction = 0.25, seed = 0))]
fn gen_planted(
    n: usize,
    m: usize,
    ones_fraction: f64,
    seed: u64,
) -> PyResult<(PyHypergraph, HashMap<u32, u32>)> {
    let inst = instances::gen_planted(n, m, ones_fraction, seed).map_err(to_value_err)?;
    Ok((
        PyHypergraph {
            inner: inst.hypergraph,
        },
        colouring_to_dict(&inst.planted),
    ))
}

#[pyfunction]
fn gen_clique_gadget(k: usize) -> PyResult<PyHypergraph> {
    if k < 2 {
        return Err(PyValueError::new_err("k must be at least 2"));
    }
    Ok(PyHypergraph {
        inner: instances::gen_clique_gadget(k),
    })
}

/// Exhaustive minimum colour count within a budget (n <= 10).
#[pyfunction]
#[pyo3(signature = (h, colour_budget = 4))]
fn brute_force_min_lo(h: &PyHypergraph, colour_budget: u32) -> PyResult<Option<u32>> {
    instances::brute_force_min_lo(&h.inner, colour_budget).map_err(to_value_err)
}

#[pymodule]
fn locol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PySolveReport>()?;
    m.add_function(wrap_pyfunction!(verify_lo_colouring, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mod2, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mod2_edges, m)?)?;
    m.add_function(wrap_pyfunction!(solve_rational, m)?)?;
    m.add_function(wrap_pyfunction!(gen_planted, m)?)?;
    m.add_function(wrap_pyfunction!(gen_clique_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_min_lo, m)?)?;
    Ok(())
}
