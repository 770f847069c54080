//! Python module `secant`: thin wrappers over `secant_core`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use secant_core::exactalg::MultiPoly;
use secant_core::{cohomtables, compositions, drk, hankel, hodge, strata, Error};

create_exception!(secant, SecantError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::OutOfRange(_) | Error::Algebra(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => SecantError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| SecantError::new_err(e.to_string()))
}

/// Polynomial in `t` with integer coefficients.
#[pyclass(name = "HodgePolynomial", module = "secant", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
pub struct PyHodgePoly(hodge::HodgePoly);

#[pymethods]
impl PyHodgePoly {
    #[new]
    #[pyo3(signature = (coefficients=None))]
    fn new(coefficients: Option<BTreeMap<u32, i64>>) -> Self {
        PyHodgePoly(hodge::HodgePoly::from_coeffs(coefficients.unwrap_or_default()))
    }

    /// `{degree: coefficient}` with zero terms dropped.
    fn coefficients(&self) -> BTreeMap<u32, i64> {
        self.0.coefficients().clone()
    }

    fn coefficient(&self, p: u32) -> i64 {
        self.0.coefficient(p)
    }

    #[getter]
    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    fn __call__(&self, t: i64) -> i64 {
        self.0.eval(t)
    }

    fn dominated_by(&self, other: &PyHodgePoly) -> bool {
        self.0.dominated_by(&other.0)
    }

    /// The same polynomial in `u, v` with `t = uv`.
    fn to_uv_string(&self) -> String {
        self.0.to_uv_string()
    }

    fn __add__(&self, other: &PyHodgePoly) -> Self {
        PyHodgePoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyHodgePoly) -> Self {
        PyHodgePoly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyHodgePoly) -> Self {
        PyHodgePoly(&self.0 * &other.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyHodgePoly(self.0.pow(e))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HodgePolynomial({})", self.0)
    }
}

#[pyclass(name = "BettiTable", module = "secant", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
pub struct PyBettiTable(hodge::BettiTable);

#[pymethods]
impl PyBettiTable {
    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.0.degrees.clone()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, j: usize) -> PyResult<u64> {
        if j < self.0.len() {
            Ok(self.0.get(j))
        } else {
            Err(pyo3::exceptions::PyIndexError::new_err(j))
        }
    }

    fn total_dimension(&self) -> u64 {
        self.0.total_dimension()
    }

    fn euler_characteristic(&self) -> i64 {
        self.0.euler_characteristic()
    }

    fn is_palindromic(&self) -> bool {
        self.0.is_palindromic()
    }

    fn to_latex(&self) -> String {
        cohomtables::betti_latex(&self.0)
    }

    /// Degrees together with weight and eigenvalue annotations.
    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("BettiTable({:?})", self.0.degrees)
    }
}

#[pyclass(name = "Stratum", module = "secant", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyStratum(strata::StratumDescriptor);

#[pymethods]
impl PyStratum {
    #[getter]
    fn composition(&self) -> Vec<usize> {
        self.0.composition.parts().to_vec()
    }

    #[getter]
    fn gcd(&self) -> usize {
        self.0.gcd
    }

    #[getter]
    fn monomial(&self) -> String {
        self.0.monomial_string()
    }

    #[getter]
    fn exponent_vector(&self) -> Vec<usize> {
        self.0.exponent_vector.clone()
    }

    #[getter]
    fn torus_rank(&self) -> usize {
        self.0.torus_rank
    }

    #[getter]
    fn affine_rank(&self) -> usize {
        self.0.affine_rank
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Stratum({:?}, f = {})", self.0.composition.parts(), self.0.monomial_string())
    }
}

#[pyclass(name = "BlockReduction", module = "secant", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyBlockReduction(hankel::BlockReduction);

#[pymethods]
impl PyBlockReduction {
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn y_coords(&self) -> Vec<String> {
        self.0.y_coords.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn p_seq(&self) -> Vec<String> {
        self.0.p_seq.iter().map(ToString::to_string).collect()
    }

    /// Outcome of each block check, keyed by case label.
    fn verify(&self) -> BTreeMap<String, bool> {
        hankel::verify_block_reduction(&self.0)
            .checks
            .iter()
            .map(|c| (c.case.label().to_string(), c.passed))
            .collect()
    }

    fn factorization_holds(&self) -> PyResult<bool> {
        hankel::factorization_holds(&self.0).map_err(to_py)
    }

    /// Checks the determinant factorization at random rational points;
    /// returns the number of points tested.
    #[pyo3(signature = (samples=100, seed=0))]
    fn check_random_points(&self, samples: usize, seed: u64) -> PyResult<usize> {
        let mut rng = StdRng::seed_from_u64(seed);
        hankel::check_factorization_at_points(&self.0, samples, &mut rng).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("BlockReduction(n={}, k={})", self.0.n, self.0.k)
    }
}

/// A differential form, possibly with a simple pole along one coordinate hyperplane.
#[pyclass(name = "Form", module = "secant", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
pub struct PyForm(drk::ExtForm);

#[pymethods]
impl PyForm {
    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    #[getter]
    fn log_pole(&self) -> Option<usize> {
        self.0.log_pole()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Residue mod `modulus` of the homogeneous degree.
    fn homogeneous_class(&self, modulus: u32) -> PyResult<i64> {
        drk::homogeneous_class(&self.0, modulus).map(|c| c.residue as i64).map_err(to_py)
    }

    /// `D_f(w) = dw + df ^ w` for `f` given as text in the form's variables.
    fn d_f(&self, f: &str) -> PyResult<PyForm> {
        let f = MultiPoly::parse(f, self.0.nvars()).map_err(|e| to_py(e.into()))?;
        drk::d_f(&f, &self.0).map(PyForm).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.0)
    }
}

/// All compositions of `n`, in mask order.
#[pyfunction]
#[pyo3(name = "compositions")]
fn all_compositions(n: usize) -> PyResult<Vec<Vec<usize>>> {
    let all = compositions::enumerate_compositions(n).map_err(to_py)?;
    Ok(all.iter().map(|c| c.parts().to_vec()).collect())
}

/// Number of compositions of `n` with coprime parts, optionally of a given length.
#[pyfunction]
#[pyo3(signature = (n, length=None))]
fn count_coprime(n: usize, length: Option<usize>) -> PyResult<i128> {
    match length {
        Some(l) => compositions::count_coprime_by_length(n, l),
        None => compositions::count_coprime(n),
    }
    .map_err(to_py)
}

#[pyfunction]
fn stratify(n: usize) -> PyResult<Vec<PyStratum>> {
    Ok(strata::stratify(n).map_err(to_py)?.into_iter().map(PyStratum).collect())
}

/// Unimodular matrix `U` and exponent `d` with `e = d * (first row of U)`.
#[pyfunction]
fn torus_normal_form(exponents: Vec<u64>) -> PyResult<(Vec<Vec<i64>>, u64)> {
    let u = strata::torus_normal_form(&exponents).map_err(to_py)?;
    Ok((u.matrix, u.exponent))
}

#[pyfunction]
#[pyo3(signature = (n, bruteforce=false))]
fn milnor_hodge(n: usize, bruteforce: bool) -> PyResult<PyHodgePoly> {
    let h = if bruteforce {
        hodge::milnor_hodge_bruteforce(n)
    } else {
        hodge::milnor_hodge_closed(n)
    };
    h.map(PyHodgePoly).map_err(to_py)
}

#[pyfunction]
fn quotient_hodge(n: usize, d: usize) -> PyResult<PyHodgePoly> {
    hodge::quotient_hodge(n, d).map(PyHodgePoly).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, d, bruteforce=false))]
fn gbundle_hodge(n: usize, d: usize, bruteforce: bool) -> PyResult<PyHodgePoly> {
    let h = if bruteforce {
        hodge::gbundle_bruteforce(n, d)
    } else {
        hodge::gbundle_hodge(n, d)
    };
    h.map(PyHodgePoly).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, annotated=true))]
fn milnor_betti(n: usize, annotated: bool) -> PyResult<PyBettiTable> {
    let t = if annotated {
        cohomtables::annotated_milnor_betti(n)
    } else {
        hodge::milnor_betti(n)
    };
    t.map(PyBettiTable).map_err(to_py)
}

#[pyfunction]
fn ih_betti(g: u32, k: u32) -> PyResult<PyBettiTable> {
    cohomtables::ih_betti(g, k).map(PyBettiTable).map_err(to_py)
}

#[pyfunction]
fn sec2_betti(g: u32) -> PyBettiTable {
    PyBettiTable(cohomtables::sec2_singular_betti(g))
}

/// `(p, q, degree, multiplicity)` for each eigenvalue `e^{2 pi i p/q}`.
#[pyfunction]
fn monodromy_eigenvalues(n: usize) -> PyResult<Vec<(u64, u64, usize, u32)>> {
    let table = cohomtables::monodromy_eigentable(n).map_err(to_py)?;
    Ok(table
        .iter()
        .map(|e| (e.eigenvalue.p(), e.eigenvalue.q(), e.degree, e.multiplicity))
        .collect())
}

type NearbyRow = (u64, u64, usize, u32, u32);

/// `(p, q, support_index, rank, weight)` for each nearby-cycle summand.
#[pyfunction]
fn nearby_decomposition(n: usize) -> PyResult<Vec<NearbyRow>> {
    let table = cohomtables::nearby_vanishing_decomposition(n).map_err(to_py)?;
    Ok(table
        .iter()
        .map(|s| (s.eigenvalue.p(), s.eigenvalue.q(), s.support_index, s.rank, s.weight))
        .collect())
}

#[pyfunction]
fn hankel_determinant(n: usize) -> String {
    hankel::hankel_determinant(n).to_string()
}

#[pyfunction]
fn block_reduce(n: usize, k: usize) -> PyResult<PyBlockReduction> {
    hankel::block_reduce(n, k).map(PyBlockReduction).map_err(to_py)
}

/// The two eigenvector forms for `det H_2`.
#[pyfunction]
fn n2_eigenvectors() -> PyResult<(PyForm, PyForm)> {
    let (a, b) = drk::n2_eigenvectors().map_err(to_py)?;
    Ok((PyForm(a), PyForm(b)))
}

#[pyfunction]
#[pyo3(signature = (m, log=false))]
fn univariate_cohomology(m: usize, log: bool) -> PyResult<Vec<PyForm>> {
    Ok(drk::univariate_drk_cohomology(m, log).map_err(to_py)?.into_iter().map(PyForm).collect())
}

/// Dimensions of the truncated class-`class` de Rham-Koszul cohomology of `f`.
#[pyfunction]
fn truncated_dims(f: &str, nvars: usize, modulus: u32, class: u32, truncation: usize) -> PyResult<Vec<usize>> {
    let f = MultiPoly::parse(f, nvars).map_err(|e| to_py(e.into()))?;
    Ok(drk::truncated_drk_dims(&f, modulus, class, truncation).map_err(to_py)?.dims)
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("secant".to_string()).chain(args);
    let code = secant_core::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
#[pyo3(name = "secant")]
fn secant_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SecantError", m.py().get_type::<SecantError>())?;
    m.add_class::<PyHodgePoly>()?;
    m.add_class::<PyBettiTable>()?;
    m.add_class::<PyStratum>()?;
    m.add_class::<PyBlockReduction>()?;
    m.add_class::<PyForm>()?;
    m.add_function(wrap_pyfunction!(all_compositions, m)?)?;
    m.add_function(wrap_pyfunction!(count_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(stratify, m)?)?;
    m.add_function(wrap_pyfunction!(torus_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(quotient_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(gbundle_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_betti, m)?)?;
    m.add_function(wrap_pyfunction!(ih_betti, m)?)?;
    m.add_function(wrap_pyfunction!(sec2_betti, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(nearby_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(hankel_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(block_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(n2_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(univariate_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_dims, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
