//! Python bindings: `import pyasize`.

use std::collections::BTreeMap;

use asize::census::{self, CensusReport};
use asize::chains::{self, ChainCoord, DescentTrace};
use asize::polyseq::{self, Family};
use asize::report;
use asize::unity::{self, ASetResult, Method};
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(family: &str) -> PyResult<Family> {
    family.parse().map_err(value_err)
}

/// 𝒜(n) as computed by one engine.
#[pyclass(name = "ASet", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyASet {
    pub n: u64,
    pub elements: Vec<u64>,
    pub method: String,
}

#[pymethods]
impl PyASet {
    fn __len__(&self) -> usize {
        self.elements.len()
    }

    fn __contains__(&self, a: u64) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    fn __repr__(&self) -> String {
        ASetResult { n: self.n, elements: self.elements.clone(), method: Method::Fast }.to_string()
    }
}

impl From<ASetResult> for PyASet {
    fn from(r: ASetResult) -> Self {
        PyASet { n: r.n, elements: r.elements, method: r.method.to_string() }
    }
}

/// Path of a descent from (a, n) down to (1, z).
#[pyclass(name = "Descent", frozen, get_all)]
pub struct PyDescent {
    pub z: u64,
    pub k: u64,
    pub i: u32,
    pub steps: Vec<(BigUint, BigUint)>,
}

#[pymethods]
impl PyDescent {
    fn __repr__(&self) -> String {
        let steps: Vec<String> = self.steps.iter().map(|(r, a)| format!("({r},{a})")).collect();
        format!("z={}, path {}, n = G_{}({})", self.z, steps.join(" -> "), self.i, self.z)
    }
}

impl From<DescentTrace> for PyDescent {
    fn from(t: DescentTrace) -> Self {
        PyDescent { z: t.z, k: t.coord.k, i: t.coord.i, steps: t.steps }
    }
}

/// Result of a chain census up to x.
#[pyclass(name = "CensusReport", frozen)]
pub struct PyCensusReport {
    inner: CensusReport,
}

#[pymethods]
impl PyCensusReport {
    #[getter]
    fn x(&self) -> u64 {
        self.inner.x
    }
    #[getter]
    fn chains_scanned(&self) -> u64 {
        self.inner.chains_scanned
    }
    #[getter]
    fn members_total(&self) -> u64 {
        self.inner.members_total
    }
    #[getter]
    fn members_distinct(&self) -> u64 {
        self.inner.members_distinct
    }
    #[getter]
    fn t_x(&self) -> u64 {
        self.inner.t_x
    }
    #[getter]
    fn duplicates(&self) -> Vec<(u64, Vec<(u64, u32)>)> {
        self.inner
            .duplicates
            .iter()
            .map(|d| (d.value, d.coords.iter().map(|c| (c.k, c.i)).collect()))
            .collect()
    }
    #[getter]
    fn histogram(&self) -> BTreeMap<u32, u64> {
        self.inner.histogram.clone()
    }
    #[getter]
    fn max_size(&self) -> u32 {
        self.inner.max_size
    }
    #[getter]
    fn max_size_at(&self) -> u64 {
        self.inner.max_size_at
    }
    /// B as an exact (numerator, denominator) pair.
    #[getter]
    fn average_b(&self) -> (u128, u128) {
        (*self.inner.average_b.numer(), *self.inner.average_b.denom())
    }
    #[getter]
    fn b_bound(&self) -> f64 {
        self.inner.b_bound
    }
    #[getter]
    fn t_x_bound(&self) -> f64 {
        self.inner.t_x_bound
    }
    #[getter]
    fn elapsed(&self) -> f64 {
        self.inner.elapsed.as_secs_f64()
    }

    fn conjecture_holds(&self) -> bool {
        self.inner.conjecture_holds()
    }

    fn to_json(&self) -> String {
        report::to_json(&self.inner)
    }

    fn table(&self) -> String {
        report::to_table(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "CensusReport(x={}, t_x={}, duplicates={}, max_size={})",
            self.inner.x,
            self.inner.t_x,
            self.inner.duplicates.len(),
            self.inner.max_size
        )
    }
}

#[pyfunction]
fn g_eval(i: usize, k: u64) -> PyResult<BigUint> {
    polyseq::g_eval(i, k).map_err(value_err)
}

#[pyfunction]
fn f_eval(i: usize, k: u64) -> BigUint {
    polyseq::f_eval(i, k)
}

/// Coefficients of G_i or F_i, lowest degree first.
#[pyfunction]
#[pyo3(signature = (family, i))]
fn coeffs(family: &str, i: usize) -> PyResult<Vec<BigInt>> {
    Ok(polyseq::coeffs(parse_family(family)?, i).coeffs().to_vec())
}

#[pyfunction]
fn factorize(n: u64) -> Vec<(u64, u32)> {
    unity::factorize(n).factors
}

#[pyfunction]
fn sqrt_units(n: u64) -> PyResult<Vec<u64>> {
    unity::sqrt_units(n).map_err(value_err)
}

#[pyfunction]
fn correct_root_count(n: u64) -> PyResult<u64> {
    unity::correct_root_count(n).map_err(value_err)
}

#[pyfunction]
fn divisor_count(x: u64) -> PyResult<u64> {
    if x == 0 {
        return Err(PyValueError::new_err("x must be at least 1"));
    }
    Ok(unity::divisor_count(x))
}

/// 𝒜(n) by `method` in {"fast", "brute", "chain"}.
#[pyfunction]
#[pyo3(signature = (n, method = "fast"))]
fn aset(n: u64, method: &str) -> PyResult<PyASet> {
    let r = match method.parse::<Method>().map_err(value_err)? {
        Method::Brute => unity::aset_brute(n).map_err(value_err)?,
        Method::Fast => unity::aset_fast(n).map_err(value_err)?,
        Method::Chain => chains::aset_chain(n).map_err(value_err)?,
    };
    Ok(r.into())
}

/// Members of chain k up to `limit` as (i, value) pairs.
#[pyfunction]
fn chain(k: u64, limit: u64) -> PyResult<Vec<(u32, u64)>> {
    Ok(chains::chain_iter(k, limit).map_err(value_err)?.into_iter().map(|(c, v)| (c.i, v)).collect())
}

#[pyfunction]
fn predecessor(k: u64, i: u32) -> PyResult<BigUint> {
    Ok(chains::predecessor_big(ChainCoord::new(k, i).map_err(value_err)?))
}

#[pyfunction]
fn descend(a: BigUint, n: BigUint) -> PyResult<PyDescent> {
    Ok(chains::descend(a, n).map_err(value_err)?.into())
}

/// Chain coordinates (k, i) holding n.
#[pyfunction]
fn locate(n: u64) -> PyResult<Vec<(u64, u32)>> {
    Ok(chains::locate(n).map_err(value_err)?.into_iter().map(|c| (c.k, c.i)).collect())
}

#[pyfunction]
fn n_x_k(x: u64, k: u64) -> PyResult<u64> {
    census::n_x_k(x, k).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (x, workers = 1))]
fn verify(py: Python<'_>, x: u64, workers: usize) -> PyResult<PyCensusReport> {
    let inner = py.detach(|| census::verify_conjecture(x, workers)).map_err(value_err)?;
    Ok(PyCensusReport { inner })
}

#[pymodule]
fn pyasize(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyASet>()?;
    m.add_class::<PyDescent>()?;
    m.add_class::<PyCensusReport>()?;
    m.add_function(wrap_pyfunction!(g_eval, m)?)?;
    m.add_function(wrap_pyfunction!(f_eval, m)?)?;
    m.add_function(wrap_pyfunction!(coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_units, m)?)?;
    m.add_function(wrap_pyfunction!(correct_root_count, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_count, m)?)?;
    m.add_function(wrap_pyfunction!(aset, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(predecessor, m)?)?;
    m.add_function(wrap_pyfunction!(descend, m)?)?;
    m.add_function(wrap_pyfunction!(locate, m)?)?;
    m.add_function(wrap_pyfunction!(n_x_k, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        let a: PyASet = unity::aset_fast(24).unwrap().into();
        assert_eq!(a.elements, vec![1, 5, 23]);
        assert_eq!(a.method, "fast");
        assert!(a.__contains__(5));
        assert_eq!(a.__repr__(), "A(24) = {1, 5, 23} (size 3)");

        let d: PyDescent = chains::descend(8u64, 21u64).unwrap().into();
        assert_eq!((d.z, d.k, d.i), (3, 3, 3));
        assert_eq!(d.__repr__(), "z=3, path (8,21) -> (3,8) -> (1,3), n = G_3(3)");
    }

    #[test]
    fn report_accessors() {
        let r = PyCensusReport { inner: census::verify_conjecture(100, 1).unwrap() };
        assert_eq!(r.t_x(), 11);
        assert_eq!(r.average_b(), (52, 25));
        assert!(r.duplicates().is_empty());
        assert!(r.conjecture_holds());
    }

    #[test]
    fn argument_errors() {
        assert!(aset(1, "fast").is_err());
        assert!(aset(10, "bogus").is_err());
        assert!(coeffs("h", 3).is_err());
        assert_eq!(coeffs("g", 2).unwrap(), vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        assert!(chain(2, 100).is_err());
        assert!(predecessor(3, 1).is_err());
        assert!(divisor_count(0).is_err());
    }
}
