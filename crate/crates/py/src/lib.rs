//! Python bindings. Node ids are 0-based; connections are `(u, v)` tuples
//! with `u < v`.

use std::collections::BTreeSet;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use stp12::audit::{decompose, normalize as normalize_reference, NormalMode, ReferenceSolution};
use stp12::exact::{self, ExactCaps, OptResult, DEFAULT_NODE_CAP, DEFAULT_TERMINAL_CAP};
use stp12::heuristics::{rayward_smith_traced, Run};
use stp12::io::GeneratorSpec;
use stp12::sixphase::{six_phase_traced, Pack3Strategy, SixPhaseOptions};
use stp12::{Connection, Error, FinishingMode, Rational};

create_exception!(
    stp12,
    StpError,
    PyValueError,
    "Invalid instance, input or solution."
);
create_exception!(
    stp12,
    CapExceededError,
    StpError,
    "Instance exceeds an exact oracle's size cap."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceededError::new_err(e.to_string()),
        _ => StpError::new_err(e.to_string()),
    }
}

type Pairs = Vec<(usize, usize)>;

fn connections(pairs: &[(usize, usize)]) -> PyResult<BTreeSet<Connection>> {
    pairs
        .iter()
        .map(|&(a, b)| Connection::new(a, b))
        .collect::<stp12::Result<_>>()
        .map_err(to_py)
}

fn pairs<'a>(conns: impl IntoIterator<Item = &'a Connection>) -> Pairs {
    conns.into_iter().map(|c| c.endpoints()).collect()
}

fn fraction<'py>(py: Python<'py>, r: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*r.numer(), *r.denom()))
}

/// An STP[1,2] instance: edges are the distance-1 pairs.
#[pyclass(name = "Instance", module = "stp12", frozen)]
pub struct PyInstance {
    inner: stp12::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(node_count: usize, edges: Pairs, terminals: Vec<usize>) -> PyResult<Self> {
        stp12::Instance::new(node_count, edges, terminals)
            .map(|inner| PyInstance { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_stp(text: &str) -> PyResult<Self> {
        parse_stp(text)
    }

    #[pyo3(signature = (name = "instance"))]
    fn to_stp(&self, name: &str) -> String {
        stp12::io::write_stp(&self.inner, name)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn terminals(&self) -> Vec<usize> {
        self.inner.terminals().to_vec()
    }

    #[getter]
    fn edges(&self) -> Pairs {
        self.inner.edges().collect()
    }

    fn distance(&self, u: usize, v: usize) -> PyResult<u64> {
        let n = self.inner.node_count();
        if u >= n || v >= n {
            return Err(StpError::new_err(format!(
                "node out of range for {n} nodes"
            )));
        }
        Ok(self.inner.distance(u, v))
    }

    /// Total cost of a set of connections (1 per edge, 2 per non-edge).
    fn cost(&self, connections: Pairs) -> PyResult<u64> {
        let conns = self::connections(&connections)?;
        stp12::cost(&self.inner, &conns).map_err(to_py)
    }

    /// Whether the connections join all terminals.
    fn is_valid(&self, connections: Pairs) -> PyResult<bool> {
        let conns = self::connections(&connections)?;
        Ok(stp12::is_valid_solution(&self.inner, &conns))
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(nodes={}, edges={}, terminals={})",
            self.inner.node_count(),
            self.inner.edge_count(),
            self.inner.terminals().len()
        )
    }
}

/// Parses an instance in STP format.
#[pyfunction]
fn parse_stp(text: &str) -> PyResult<PyInstance> {
    stp12::io::parse_stp(text)
        .map(|inner| PyInstance { inner })
        .map_err(to_py)
}

/// Builds an instance from a generator spec such as `star-cluster:k=4,m=2`.
#[pyfunction]
#[pyo3(signature = (spec, seed = None))]
fn generate(spec: &str, seed: Option<u64>) -> PyResult<PyInstance> {
    let mut parsed: GeneratorSpec = spec.parse().map_err(to_py)?;
    if let Some(s) = seed {
        parsed.seed = s;
    }
    stp12::io::generate(&parsed)
        .map(|inner| PyInstance { inner })
        .map_err(to_py)
}

fn finishing(mode: &str) -> PyResult<FinishingMode> {
    mode.parse().map_err(to_py)
}

fn run_result(run: Run) -> (u64, Pairs) {
    (run.solution.cost, pairs(&run.solution.connections))
}

fn opt_result(r: OptResult) -> (u64, Pairs) {
    (r.cost, pairs(&r.witness))
}

/// Greedy star collapsing; returns `(cost, connections)`.
#[pyfunction]
#[pyo3(signature = (instance, finishing = "cheapest"))]
fn rayward_smith(instance: &PyInstance, finishing: &str) -> PyResult<(u64, Pairs)> {
    let mode = self::finishing(finishing)?;
    rayward_smith_traced(&instance.inner, mode)
        .map(run_result)
        .map_err(to_py)
}

/// The six-phase algorithm; returns `(cost, connections)`.
#[pyfunction]
#[pyo3(signature = (instance, finishing = "cheapest", pack3 = "exact", pack3_cap = None))]
fn six_phase(
    instance: &PyInstance,
    finishing: &str,
    pack3: &str,
    pack3_cap: Option<usize>,
) -> PyResult<(u64, Pairs)> {
    let options = SixPhaseOptions {
        finishing: self::finishing(finishing)?,
        pack3: pack3.parse::<Pack3Strategy>().map_err(to_py)?,
        pack3_cap,
    };
    six_phase_traced(&instance.inner, options)
        .map(run_result)
        .map_err(to_py)
}

/// Exact optimum by enumerating Steiner node subsets.
#[pyfunction]
#[pyo3(signature = (instance, node_cap = DEFAULT_NODE_CAP))]
fn brute_force(instance: &PyInstance, node_cap: usize) -> PyResult<(u64, Pairs)> {
    exact::brute_force_opt_capped(&instance.inner, node_cap)
        .map(opt_result)
        .map_err(to_py)
}

/// Exact optimum by Dreyfus-Wagner over terminal subsets.
#[pyfunction]
#[pyo3(signature = (instance, terminal_cap = DEFAULT_TERMINAL_CAP))]
fn dreyfus_wagner(instance: &PyInstance, terminal_cap: usize) -> PyResult<(u64, Pairs)> {
    exact::dreyfus_wagner_capped(&instance.inner, terminal_cap)
        .map(opt_result)
        .map_err(to_py)
}

/// Exact optimum using whichever oracle fits within the caps.
#[pyfunction]
#[pyo3(signature = (instance, node_cap = DEFAULT_NODE_CAP, terminal_cap = DEFAULT_TERMINAL_CAP))]
fn optimum(instance: &PyInstance, node_cap: usize, terminal_cap: usize) -> PyResult<(u64, Pairs)> {
    let caps = ExactCaps {
        max_nodes: node_cap,
        max_terminals: terminal_cap,
    };
    exact::optimum(&instance.inner, caps)
        .map(opt_result)
        .map_err(to_py)
}

/// Cost index of a structure with `terminals` components and `edges` edges,
/// as a `fractions.Fraction`.
#[pyfunction]
fn cost_index(py: Python<'_>, terminals: usize, edges: usize) -> PyResult<Bound<'_, PyAny>> {
    let ci = stp12::sixphase::cost_index(terminals, edges).map_err(to_py)?;
    fraction(py, ci.value())
}

/// Maximum-cardinality matching of a general graph, as sorted pairs.
#[pyfunction]
fn maximum_matching(node_count: usize, edges: Pairs) -> PyResult<Pairs> {
    if let Some(&(u, v)) = edges
        .iter()
        .find(|&&(u, v)| u >= node_count || v >= node_count || u == v)
    {
        return Err(StpError::new_err(format!(
            "bad edge ({u}, {v}) for {node_count} nodes"
        )));
    }
    let mate = stp12::matching::maximum_matching(node_count, &edges);
    Ok(pairs(&stp12::matching::matched_pairs(&mate)))
}

/// Normalizes a solution (normally an optimal one) and returns a dict with
/// `connections`, `cost`, `steps`, `histogram` and `normal`.
#[pyfunction]
#[pyo3(signature = (instance, connections, mode = "s3"))]
fn normalize<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    connections: Pairs,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = &instance.inner;
    let mode: NormalMode = mode.parse().map_err(to_py)?;
    let reference =
        ReferenceSolution::new(inst, self::connections(&connections)?).map_err(to_py)?;
    let result = normalize_reference(inst, &reference, mode).map_err(to_py)?;
    let decomposition = decompose(inst, &result.reference);
    let out = PyDict::new(py);
    out.set_item("connections", pairs(result.reference.connections()))?;
    out.set_item("cost", result.reference.cost(inst))?;
    out.set_item("steps", result.trace.len())?;
    out.set_item("histogram", decomposition.histogram())?;
    out.set_item("normal", decomposition.is_normal(mode))?;
    Ok(out)
}

#[pymodule(name = "stp12")]
fn stp12_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add("StpError", m.py().get_type::<StpError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add_function(wrap_pyfunction!(parse_stp, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(rayward_smith, m)?)?;
    m.add_function(wrap_pyfunction!(six_phase, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(dreyfus_wagner, m)?)?;
    m.add_function(wrap_pyfunction!(optimum, m)?)?;
    m.add_function(wrap_pyfunction!(cost_index, m)?)?;
    m.add_function(wrap_pyfunction!(maximum_matching, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    Ok(())
}
