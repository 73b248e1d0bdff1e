//! Python bindings for the `decdnnf` library.
//!
//! Terms, assignments and circuits cross the boundary in their textual
//! forms (the same syntax the CLI uses), which keeps the Python surface
//! small: a `Circuit` class plus free functions for enumeration,
//! sufficient reasons, abduction and the hypergraph bridge.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use decdnnf::circuit::Circuit;
use decdnnf::explain::{
    abduction_exists, cnf_to_obdd_chain, min_transversals_via_sr, restricted_implicant_exists,
    sr_all, sr_greedy, AbductionInstance, SrQuery,
};
use decdnnf::formats::{
    import_c2d_nnf, parse_assignment, parse_circuit, parse_dimacs, parse_term, print_circuit,
    Hypergraph,
};
use decdnnf::oracle::{random_circuit, tt_of_circuit, tt_prime_implicants};
use decdnnf::pi_batch::ip_all;
use decdnnf::pi_incremental::{another_ip, enumerate_ip, IpEnumerator};
use decdnnf::term::{Term, TermSet, Var};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn term_strings(set: &TermSet) -> Vec<String> {
    set.iter().map(Term::to_string).collect()
}

fn parse_vars(names: Vec<String>) -> PyResult<Vec<Var>> {
    names.iter().map(|n| Var::new(n).map_err(err)).collect()
}

/// A decision-DNNF circuit.
#[pyclass(name = "Circuit", skip_from_py_object)]
struct PyCircuit {
    inner: Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Parses the native text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: parse_circuit(text).map_err(err)? })
    }

    /// Imports a c2d-style NNF file.
    #[staticmethod]
    fn import_nnf(text: &str) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: import_c2d_nnf(text).map_err(err)? })
    }

    /// The constant-true or constant-false circuit.
    #[staticmethod]
    fn constant(value: bool) -> PyCircuit {
        PyCircuit { inner: Circuit::constant(value) }
    }

    fn __str__(&self) -> String {
        print_circuit(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "<Circuit: {} nodes, {} vars>",
            self.inner.num_nodes(),
            self.inner.vars().len()
        )
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    /// Number of edges.
    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    /// Declared variable names, sorted.
    fn vars(&self) -> Vec<String> {
        self.inner.vars().iter().map(|v| v.name().to_string()).collect()
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    fn is_reduced(&self) -> bool {
        self.inner.is_reduced()
    }

    /// Validation violations as strings; empty when valid.
    fn violations(&self) -> Vec<String> {
        self.inner.validate().violations().iter().map(|v| v.to_string()).collect()
    }

    /// The equivalent circuit with no internal constant-0 node.
    fn reduce(&self) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: self.inner.reduce().map_err(err)? })
    }

    /// Conditions on a term such as `"-b e"`.
    fn condition(&self, term: &str) -> PyResult<PyCircuit> {
        let t = parse_term(term).map_err(err)?;
        Ok(PyCircuit { inner: self.inner.condition(&t).map_err(err)? })
    }

    /// The subcircuit rooted at a node id.
    fn subcircuit(&self, node: usize) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: self.inner.subcircuit(node).map_err(err)? })
    }

    /// Evaluates a total assignment such as `"b=1,e=0,h=1"`.
    fn evaluate(&self, instance: &str) -> PyResult<bool> {
        let a = parse_assignment(instance).map_err(err)?;
        self.inner.evaluate(&a).map_err(err)
    }

    /// Number of models over the declared variables.
    fn count_models(&self) -> PyResult<BigUint> {
        let over: BTreeSet<Var> = self.inner.vars().iter().cloned().collect();
        self.inner.count_models(&over).map_err(err)
    }

    /// Whether the term entails the circuit.
    fn is_implicant(&self, term: &str) -> PyResult<bool> {
        let t = parse_term(term).map_err(err)?;
        self.inner.is_implicant(&t).map_err(err)
    }
}

/// Streams prime implicants; supports the iterator protocol.
#[pyclass(name = "PiIterator")]
struct PyPiIterator {
    inner: IpEnumerator,
}

#[pymethods]
impl PyPiIterator {
    fn __iter__(slf: PyRef<'_, Self>) -> PyRef<'_, Self> {
        slf
    }

    fn __next__(&mut self) -> Option<String> {
        self.inner.next().map(|t| t.to_string())
    }

    /// True once the complete set has been produced.
    fn is_exhausted(&self) -> bool {
        self.inner.is_exhausted()
    }
}

/// All prime implicants, sorted.
#[pyfunction(name = "ip_all")]
fn py_ip_all(circuit: &PyCircuit) -> PyResult<Vec<String>> {
    Ok(term_strings(&ip_all(&circuit.inner).map_err(err)?))
}

/// A prime implicant outside `known`, or `None` when `known` is complete.
#[pyfunction(name = "another_ip")]
fn py_another_ip(circuit: &PyCircuit, known: Vec<String>) -> PyResult<Option<String>> {
    let s: TermSet = known
        .iter()
        .map(|t| parse_term(t).map_err(err))
        .collect::<PyResult<_>>()?;
    Ok(another_ip(&circuit.inner, &s).map_err(err)?.map(|t| t.to_string()))
}

/// An iterator over prime implicants, at most `limit` when given.
#[pyfunction(name = "enumerate_ip")]
#[pyo3(signature = (circuit, limit=None))]
fn py_enumerate_ip(circuit: &PyCircuit, limit: Option<usize>) -> PyResult<PyPiIterator> {
    Ok(PyPiIterator { inner: enumerate_ip(&circuit.inner, limit).map_err(err)? })
}

/// One sufficient reason for the instance's classification.
#[pyfunction(name = "sr_one")]
fn py_sr_one(circuit: &PyCircuit, instance: &str) -> PyResult<String> {
    let a = parse_assignment(instance).map_err(err)?;
    let q = SrQuery::new(&circuit.inner, &a).map_err(err)?;
    Ok(sr_greedy(&q).map_err(err)?.to_string())
}

/// Every sufficient reason, sorted, plus the classification side.
#[pyfunction(name = "sr_all")]
fn py_sr_all(circuit: &PyCircuit, instance: &str) -> PyResult<(bool, Vec<String>)> {
    let a = parse_assignment(instance).map_err(err)?;
    let q = SrQuery::new(&circuit.inner, &a).map_err(err)?;
    Ok((q.is_positive(), term_strings(&sr_all(&q).map_err(err)?)))
}

/// A subset-minimal abductive explanation over the hypothesis variables,
/// or `None` when none exists.
#[pyfunction(name = "abduce")]
#[pyo3(signature = (circuit, hypotheses, manifestation, cap=None))]
fn py_abduce(
    circuit: &PyCircuit,
    hypotheses: Vec<String>,
    manifestation: &str,
    cap: Option<usize>,
) -> PyResult<Option<String>> {
    let m = parse_term(manifestation).map_err(err)?;
    let mut inst = AbductionInstance::new(&circuit.inner, parse_vars(hypotheses)?, m).map_err(err)?;
    if let Some(cap) = cap {
        inst = inst.with_cap(cap);
    }
    Ok(abduction_exists(&inst).map_err(err)?.map(|t| t.to_string()))
}

/// A subset-minimal implicant whose variables all lie in `over`, or `None`.
#[pyfunction(name = "restricted_implicant")]
#[pyo3(signature = (circuit, over, cap=None))]
fn py_restricted_implicant(
    circuit: &PyCircuit,
    over: Vec<String>,
    cap: Option<usize>,
) -> PyResult<Option<String>> {
    let y: BTreeSet<Var> = parse_vars(over)?.into_iter().collect();
    Ok(restricted_implicant_exists(&circuit.inner, &y, cap)
        .map_err(err)?
        .map(|t| t.to_string()))
}

/// Minimal transversals of a hypergraph given as a list of edges, each a
/// list of vertex names. Sorted by size, then lexicographically.
#[pyfunction(name = "min_transversals")]
fn py_min_transversals(edges: Vec<Vec<String>>) -> PyResult<Vec<Vec<String>>> {
    let edges: Vec<BTreeSet<Var>> = edges
        .into_iter()
        .map(|e| Ok(parse_vars(e)?.into_iter().collect()))
        .collect::<PyResult<_>>()?;
    let h = Hypergraph::new([], edges);
    let mut rows: Vec<Vec<String>> = min_transversals_via_sr(&h)
        .map_err(err)?
        .into_iter()
        .map(|s| s.iter().map(|v| v.name().to_string()).collect())
        .collect();
    rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(rows)
}

/// Compiles DIMACS CNF text into the selector-chain circuit; returns the
/// circuit and the original variable names.
#[pyfunction(name = "cnf_to_chain")]
fn py_cnf_to_chain(dimacs: &str) -> PyResult<(PyCircuit, Vec<String>)> {
    let cnf = parse_dimacs(dimacs).map_err(err)?;
    let (c, y) = cnf_to_obdd_chain(&cnf);
    let names = y.iter().map(|v| v.name().to_string()).collect();
    Ok((PyCircuit { inner: c }, names))
}

/// A pseudorandom valid reduced circuit, deterministic per seed.
#[pyfunction(name = "random_circuit")]
#[pyo3(signature = (seed, num_vars=5, max_nodes=30))]
fn py_random_circuit(seed: u64, num_vars: usize, max_nodes: usize) -> PyResult<PyCircuit> {
    if num_vars > 12 {
        return Err(err("random circuits support at most 12 variables"));
    }
    Ok(PyCircuit { inner: random_circuit(seed, num_vars, max_nodes) })
}

/// Prime implicants by truth-table brute force; the testing oracle.
#[pyfunction(name = "oracle_pi")]
fn py_oracle_pi(circuit: &PyCircuit) -> PyResult<Vec<String>> {
    let tt = tt_of_circuit(&circuit.inner).map_err(err)?;
    Ok(term_strings(&tt_prime_implicants(&tt)))
}

#[pymodule]
fn decdnnf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyPiIterator>()?;
    m.add_function(wrap_pyfunction!(py_ip_all, m)?)?;
    m.add_function(wrap_pyfunction!(py_another_ip, m)?)?;
    m.add_function(wrap_pyfunction!(py_enumerate_ip, m)?)?;
    m.add_function(wrap_pyfunction!(py_sr_one, m)?)?;
    m.add_function(wrap_pyfunction!(py_sr_all, m)?)?;
    m.add_function(wrap_pyfunction!(py_abduce, m)?)?;
    m.add_function(wrap_pyfunction!(py_restricted_implicant, m)?)?;
    m.add_function(wrap_pyfunction!(py_min_transversals, m)?)?;
    m.add_function(wrap_pyfunction!(py_cnf_to_chain, m)?)?;
    m.add_function(wrap_pyfunction!(py_random_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(py_oracle_pi, m)?)?;
    Ok(())
}
