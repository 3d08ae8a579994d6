//! Python bindings: partitions, identity checks, factor tables and
//! Macdonald polynomials.

use hookbox::arith::{Locus, QTFraction};
use hookbox::cli::{pretty_fraction, render_table, table_view, Stage};
use hookbox::identities::{self, IdentityValue, Level};
use hookbox::{symfunc, BoxCoord, Error, Partition};
use num_bigint::BigInt;
use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse(_) => PyValueError::new_err(e.to_string()),
        Error::Resource(_) => PyMemoryError::new_err(e.to_string()),
        Error::Pole(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// An integer partition, largest part first.
#[pyclass(name = "Partition", module = "pyhookbox", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyPartition {
    inner: Partition,
}

/// A partition given as a `Partition`, a string like `"5,4,4,3,2"`, or a list.
#[derive(FromPyObject)]
pub enum PartitionArg {
    Obj(PyPartition),
    Text(String),
    Parts(Vec<usize>),
}

impl PartitionArg {
    fn get(self) -> PyResult<Partition> {
        match self {
            PartitionArg::Obj(p) => Ok(p.inner),
            PartitionArg::Text(s) => s.parse().map_err(py_err),
            PartitionArg::Parts(v) => Partition::new(v).map_err(py_err),
        }
    }
}

#[pymethods]
impl PyPartition {
    #[new]
    #[pyo3(signature = (parts=None))]
    fn new(parts: Option<PartitionArg>) -> PyResult<Self> {
        let inner = match parts {
            Some(p) => p.get()?,
            None => Partition::empty(),
        };
        Ok(PyPartition { inner })
    }

    #[getter]
    fn parts(&self) -> Vec<usize> {
        self.inner.parts().to_vec()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    fn weighted_size(&self) -> usize {
        self.inner.weighted_size()
    }

    fn conjugate(&self) -> PyPartition {
        PyPartition {
            inner: self.inner.conjugate(),
        }
    }

    fn dominates(&self, other: PartitionArg) -> PyResult<bool> {
        Ok(self.inner.dominates(&other.get()?))
    }

    /// Statistics of the box in 1-based position `(row, col)`.
    fn box_stats<'py>(&self, py: Python<'py>, row: usize, col: usize) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.box_stats(BoxCoord::new(row, col)).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("content", s.content)?;
        d.set_item("hook", s.hook)?;
        d.set_item("arm", s.arm)?;
        d.set_item("leg", s.leg)?;
        d.set_item("coarm", s.coarm)?;
        d.set_item("coleg", s.coleg)?;
        Ok(d)
    }

    /// Hook lengths, row by row.
    fn hooks(&self) -> Vec<Vec<usize>> {
        identities::box_grid(&self.inner, |b| self.inner.box_stats(b).expect("own box").hook)
    }

    /// Contents, row by row.
    fn contents(&self) -> Vec<Vec<i64>> {
        identities::box_grid(&self.inner, |b| self.inner.box_stats(b).expect("own box").content)
    }

    fn __len__(&self) -> usize {
        self.inner.length()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Partition({:?})", self.inner.parts())
    }
}

fn level(s: &str) -> PyResult<Level> {
    s.parse().map_err(py_err)
}

fn value_text(v: &IdentityValue) -> String {
    match v {
        IdentityValue::Rational(r) => r.clone(),
        IdentityValue::Bag(b) => b.to_string(),
    }
}

/// Checks one identity; `n` defaults to the length of the partition.
#[pyfunction]
#[pyo3(signature = (level_name, lam, n=None))]
fn verify<'py>(
    py: Python<'py>,
    level_name: &str,
    lam: PartitionArg,
    n: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let lambda = lam.get()?;
    let n = n.unwrap_or(lambda.length());
    let r = identities::verify(level(level_name)?, &lambda, n).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("equal", r.equal)?;
    d.set_item("lhs", value_text(&r.lhs))?;
    d.set_item("rhs", value_text(&r.rhs))?;
    d.set_item("fast_path", r.fast_path)?;
    d.set_item("json", serde_json::to_string(&r).map_err(json_err)?)?;
    Ok(d)
}

/// `Π (n + c(b)) / h(b)` as an exact integer.
#[pyfunction]
fn integer_lhs(lam: PartitionArg, n: usize) -> PyResult<BigInt> {
    let v = identities::integer_lhs(&lam.get()?, n).map_err(py_err)?;
    if !v.is_integer() {
        return Err(PyRuntimeError::new_err(format!("non-integral value {v}")));
    }
    Ok(v.to_integer())
}

/// Runs a sweep and returns counts plus failing `(parts, n)` pairs.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, level_name: &str, max_size: usize, max_n: usize) -> PyResult<Bound<'py, PyDict>> {
    let lv = level(level_name)?;
    let s = py
        .detach(|| identities::sweep(lv, max_size, max_n))
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("checked", s.checked)?;
    d.set_item("passed", s.passed())?;
    let failures: Vec<(Vec<usize>, usize)> = s
        .failures
        .iter()
        .map(|c| (c.lambda.parts().to_vec(), c.n))
        .collect();
    d.set_item("failures", failures)?;
    d.set_item("fast_path_misses", s.fast_path_misses.len())?;
    Ok(d)
}

fn stage(s: &str) -> PyResult<Stage> {
    match s {
        "raw" => Ok(Stage::Raw),
        "cancelled" => Ok(Stage::Cancelled),
        "reversed" => Ok(Stage::Reversed),
        "completed" => Ok(Stage::Completed),
        _ => Err(PyValueError::new_err(format!("unknown stage {s:?}"))),
    }
}

/// The elliptic factor table at one stage, as text or JSON.
#[pyfunction]
#[pyo3(signature = (lam, n, stage_name="completed", as_json=false))]
fn factor_table(lam: PartitionArg, n: usize, stage_name: &str, as_json: bool) -> PyResult<String> {
    let lambda = lam.get()?;
    let view = table_view(&lambda, n, stage(stage_name)?).map_err(py_err)?;
    if as_json {
        serde_json::to_string(&view).map_err(json_err)
    } else {
        Ok(render_table(&lambda, n, &view))
    }
}

fn coeff_dict<'py>(py: Python<'py>, f: &symfunc::SymFunc) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (mu, c) in f.coeffs() {
        d.set_item(PyTuple::new(py, mu.parts())?, pretty_fraction(c))?;
    }
    Ok(d)
}

/// `P_λ` as `{mu: coefficient}`, coefficients written as fractions.
#[pyfunction]
fn macdonald_p<'py>(py: Python<'py>, lam: PartitionArg) -> PyResult<Bound<'py, PyDict>> {
    let lambda = lam.get()?;
    let f = py.detach(|| symfunc::macdonald_p(&lambda)).map_err(py_err)?;
    coeff_dict(py, &f)
}

/// `P_λ` in the JSON schema shared with the command line.
#[pyfunction]
fn macdonald_json(py: Python<'_>, lam: PartitionArg) -> PyResult<String> {
    let lambda = lam.get()?;
    let f = py.detach(|| symfunc::macdonald_p(&lambda)).map_err(py_err)?;
    serde_json::to_string(&f).map_err(json_err)
}

/// Restriction of `P_λ` to `q=t`, `t=1`, `q=1`, `q=0` or `t=0`.
#[pyfunction]
fn specialize<'py>(py: Python<'py>, lam: PartitionArg, at: &str) -> PyResult<Bound<'py, PyDict>> {
    let lambda = lam.get()?;
    let locus = Locus::parse(at).map_err(py_err)?;
    let f = py.detach(|| symfunc::specialize_family(&lambda, locus)).map_err(py_err)?;
    coeff_dict(py, &f)
}

/// Principal specialization of `P_λ` next to the elliptic product.
#[pyfunction]
fn principal_check<'py>(py: Python<'py>, lam: PartitionArg, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let lambda = lam.get()?;
    let c = py.detach(|| symfunc::principal_check(&lambda, n)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("principal", pretty_fraction(&c.principal))?;
    d.set_item("elliptic_lhs", pretty_fraction(&c.elliptic_lhs))?;
    d.set_item("weighted_size", c.weighted_size)?;
    d.set_item("literal_equal", c.literal_equal)?;
    d.set_item("normalized_equal", c.normalized_equal)?;
    Ok(d)
}

/// Evaluates a fraction from the JSON schema at rational-free float values.
#[pyfunction]
fn eval_fraction(json: &str, q: f64, t: f64) -> PyResult<f64> {
    let f: QTFraction = serde_json::from_str(json).map_err(json_err)?;
    Ok(f.eval_f64(q, t))
}

#[pymodule]
fn pyhookbox(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartition>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(integer_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(factor_table, m)?)?;
    m.add_function(wrap_pyfunction!(macdonald_p, m)?)?;
    m.add_function(wrap_pyfunction!(macdonald_json, m)?)?;
    m.add_function(wrap_pyfunction!(specialize, m)?)?;
    m.add_function(wrap_pyfunction!(principal_check, m)?)?;
    m.add_function(wrap_pyfunction!(eval_fraction, m)?)?;
    Ok(())
}
