//! Python module `kfib`: sequences, certified roots, the verification scans
//! and the triple search. Structured results come back as plain dicts and
//! lists (exact integers as Python ints or decimal strings).

use kfib_core::{asymptotics, bounds, charpoly, multindep, sequence, squares, triples, Error};
use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::TermOverflow { .. } => PyValueError::new_err(e.to_string()),
        Error::InsufficientPrecision { .. } | Error::PrecisionCap { .. } => {
            PyArithmeticError::new_err(e.to_string())
        }
        Error::Io(_) => PyOSError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for kfib_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

/// Round-trips a serializable record through `json.loads`.
fn to_python<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Cached k-generalized Fibonacci sequence.
#[pyclass(name = "Sequence")]
struct PySequence {
    inner: sequence::SequenceCache,
}

#[pymethods]
impl PySequence {
    #[new]
    fn new(k: usize) -> PyResult<Self> {
        Ok(PySequence {
            inner: sequence::SequenceCache::new(k).or_raise()?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn term(&mut self, n: i64) -> PyResult<BigInt> {
        self.inner.term(n).or_raise().cloned()
    }

    /// Smallest index n with F_n = value, or None.
    fn membership(&mut self, value: BigInt) -> PyResult<Option<i64>> {
        self.inner.membership(&value).or_raise()
    }

    fn __getitem__(&mut self, n: i64) -> PyResult<BigInt> {
        self.term(n)
    }

    fn __repr__(&self) -> String {
        format!("Sequence(k={})", self.inner.k())
    }
}

/// Certified enclosures of the roots of the characteristic polynomial.
#[pyclass(name = "Roots", frozen)]
struct PyRoots {
    inner: charpoly::RootSet,
}

#[pymethods]
impl PyRoots {
    /// Roots at `prec` bits, or under the automatic precision policy.
    #[new]
    #[pyo3(signature = (k, prec=None))]
    fn new(k: usize, prec: Option<u32>) -> PyResult<Self> {
        let inner = match prec {
            Some(p) => charpoly::all_roots(k, p),
            None => charpoly::all_roots_auto(k),
        }
        .or_raise()?;
        Ok(PyRoots { inner })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.inner.working_precision()
    }

    /// Dominant root as (lower, upper) floats of its enclosure.
    fn dominant(&self) -> (f64, f64) {
        let d = self.inner.dominant();
        (d.lo().to_f64(), d.hi().to_f64())
    }

    /// Dominant root enclosure as {"mid", "rad"} decimal strings.
    fn dominant_enclosure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, self.inner.dominant())
    }

    /// Non-dominant roots as complex midpoints.
    fn others(&self) -> Vec<(f64, f64)> {
        self.inner
            .others()
            .iter()
            .map(|b| (b.re.to_f64(), b.im.to_f64()))
            .collect()
    }

    fn moduli(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.other_moduli().or_raise()?.iter().map(|m| m.to_f64()).collect())
    }

    fn in_window(&self) -> PyResult<bool> {
        bounds::root_window(&self.inner).or_raise()
    }

    fn independence_certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &multindep::independence_certificate(&self.inner).or_raise()?)
    }

    /// Binet coefficient f_1 as a float.
    fn f1(&self) -> PyResult<f64> {
        Ok(charpoly::binet_coefficients(&self.inner).or_raise()?.f1().to_f64())
    }

    fn __repr__(&self) -> String {
        format!("Roots(k={}, prec={})", self.inner.k(), self.inner.working_precision())
    }
}

/// A triple `1 < a < b < c` with `ab+1 = F_x`, `ac+1 = F_y`, `bc+1 = F_z`.
#[pyclass(name = "TripleSolution", frozen, get_all)]
struct PyTripleSolution {
    k: usize,
    a: BigInt,
    b: BigInt,
    c: BigInt,
    x: u64,
    y: u64,
    z: u64,
}

impl From<triples::TripleSolution> for PyTripleSolution {
    fn from(s: triples::TripleSolution) -> Self {
        PyTripleSolution {
            k: s.k,
            a: s.a,
            b: s.b,
            c: s.c,
            x: s.x,
            y: s.y,
            z: s.z,
        }
    }
}

#[pymethods]
impl PyTripleSolution {
    fn __repr__(&self) -> String {
        format!(
            "TripleSolution(k={}, a={}, b={}, c={}, x={}, y={}, z={})",
            self.k, self.a, self.b, self.c, self.x, self.y, self.z
        )
    }
}

#[pyfunction(name = "kfib")]
fn term(k: usize, n: i64) -> PyResult<BigInt> {
    sequence::kfib(k, n).or_raise()
}

#[pyfunction]
fn membership(k: usize, value: BigInt) -> PyResult<Option<i64>> {
    sequence::membership(k, &value).or_raise()
}

/// |N(p alpha - q)| as a (numerator, denominator) pair.
#[pyfunction]
fn norm_linear_form(k: usize, p: i64, q: i64) -> PyResult<(BigInt, BigInt)> {
    let r = charpoly::norm_linear_form_int(k, p, q).or_raise()?;
    Ok((r.numer().clone(), r.denom().clone()))
}

#[pyfunction]
fn verify_size_bounds<'py>(py: Python<'py>, k: usize, n_max: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &bounds::verify_size_bounds(k, n_max).or_raise()?)
}

#[pyfunction]
fn verify_binet_residuals<'py>(py: Python<'py>, k: usize, n_max: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &bounds::verify_binet_residuals(k, n_max).or_raise()?)
}

#[pyfunction]
fn gcd_scan<'py>(py: Python<'py>, k: usize, x_max: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &bounds::gcd_scan(k, x_max).or_raise()?)
}

/// Nonzero exponent vectors with |m_i| <= bound that may give a root of unity.
#[pyfunction]
fn relation_probe(k: usize, bound: u32) -> PyResult<Vec<Vec<i64>>> {
    multindep::probe_relations(k, bound).or_raise()
}

#[pyfunction]
fn discriminant(k: u64) -> PyResult<BigInt> {
    squares::discriminant(k).or_raise()
}

/// (is_square, floor_sqrt); the floor is None for negative input.
#[pyfunction]
fn is_perfect_square(n: BigInt) -> (bool, Option<BigInt>) {
    let t = squares::is_perfect_square(&n);
    (t.is_square, t.floor)
}

#[pyfunction]
fn residue_witness<'py>(py: Python<'py>, k: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &squares::residue_witness(k).or_raise()?)
}

#[pyfunction]
fn square_scan<'py>(py: Python<'py>, k_max: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &squares::scan(k_max).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (k, z_max, prune=true))]
fn search(py: Python<'_>, k: usize, z_max: u64, prune: bool) -> PyResult<Vec<PyTripleSolution>> {
    let opts = triples::SearchOptions {
        prune,
        ..Default::default()
    };
    let state = py
        .detach(|| triples::search(k, z_max, None, &opts))
        .or_raise()?;
    Ok(state.solutions.into_iter().map(Into::into).collect())
}

/// (x, y, z) if ab+1, ac+1 and bc+1 are all in the sequence, else None.
#[pyfunction]
fn verify_solution(k: usize, a: BigInt, b: BigInt, c: BigInt) -> PyResult<Option<(u64, u64, u64)>> {
    Ok(triples::verify_solution(k, &a, &b, &c)
        .or_raise()?
        .map(|t| (t.x, t.y, t.z)))
}

/// Order-T expansion of c at (x, y, z) compared with the exact value.
#[pyfunction]
#[pyo3(signature = (k, order, x, y, z, prec=256))]
fn expansion_report<'py>(
    py: Python<'py>,
    k: usize,
    order: u32,
    x: u64,
    y: u64,
    z: u64,
    prec: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let roots = charpoly::all_roots(k, prec).or_raise()?;
    let coeffs = charpoly::binet_coefficients(&roots).or_raise()?;
    let rep = asymptotics::expansion_report(k, order, x, y, z, &roots, &coeffs).or_raise()?;
    to_python(py, &rep)
}

#[pymodule(name = "kfib")]
fn kfib_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_class::<PyRoots>()?;
    m.add_class::<PyTripleSolution>()?;
    m.add_function(wrap_pyfunction!(term, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(norm_linear_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_size_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(verify_binet_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_scan, m)?)?;
    m.add_function(wrap_pyfunction!(relation_probe, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(is_perfect_square, m)?)?;
    m.add_function(wrap_pyfunction!(residue_witness, m)?)?;
    m.add_function(wrap_pyfunction!(square_scan, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_solution, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_report, m)?)?;
    Ok(())
}
