//! Python bindings. Matrices cross the boundary as lists of rows of Python
//! `complex` (real numbers are accepted on input).

use ence_core::detect::{self, CommutationReport, DetectionReport};
use ence_core::linalg::{self, Spectrum};
use ence_core::preserver::{self, Branch, MapKind};
use ence_core::states::{self, Seed};
use ence_core::{BipartiteDims, CMatrix, Complex64, DensityMatrix, Side};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type Rows = Vec<Vec<Complex64>>;

fn err(e: ence_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_cmatrix(rows: Rows) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square (a list of equal-length rows)"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    CMatrix::from_row_major(n, &flat).map_err(err)
}

fn to_rows(m: &CMatrix) -> Rows {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect()
}

fn to_density(rows: Rows) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_cmatrix(rows)?).map_err(err)
}

fn dims(d: (usize, usize)) -> PyResult<BipartiteDims> {
    BipartiteDims::new(d.0, d.1).map_err(err)
}

fn side(s: &str) -> PyResult<Side> {
    s.parse().map_err(|_| PyValueError::new_err(format!("side must be 'A' or 'B', got {s:?}")))
}

fn values(s: &Spectrum) -> Vec<Complex64> {
    s.values().to_vec()
}

fn detection_dict<'py>(py: Python<'py>, r: &DetectionReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("detected", r.detected)?;
    d.set_item("deviation", r.deviation)?;
    d.set_item("spectrum_before", values(&r.spectrum_before))?;
    d.set_item("spectrum_after", values(&r.spectrum_after))?;
    Ok(d)
}

fn commutation_dict<'py>(py: Python<'py>, r: &CommutationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passes", r.passes)?;
    d.set_item("max_commutator_norm", r.max_commutator_norm)?;
    d.set_item("effective_tol", r.effective_tol)?;
    d.set_item("pairs_tested", r.pairs_tested)?;
    d.set_item("classical_side", r.classical_side.to_string())?;
    Ok(d)
}

/// Linear map on d×d matrices, stored as its d²×d² matrix on vec(A)
/// (column stacking).
#[pyclass(name = "Superoperator", from_py_object)]
#[derive(Clone)]
struct PySuperoperator(ence_core::Superoperator);

#[pymethods]
impl PySuperoperator {
    #[new]
    fn new(matrix: Rows) -> PyResult<Self> {
        Ok(Self(ence_core::Superoperator::new(to_cmatrix(matrix)?).map_err(err)?))
    }

    #[staticmethod]
    fn identity(d: usize) -> Self {
        Self(ence_core::Superoperator::identity(d))
    }

    #[staticmethod]
    fn transpose(d: usize) -> Self {
        Self(ence_core::Superoperator::transpose(d))
    }

    /// `A ↦ S⁻¹AS`
    #[staticmethod]
    fn conjugation(s: Rows) -> PyResult<Self> {
        Ok(Self(ence_core::Superoperator::conjugation(&to_cmatrix(s)?).map_err(err)?))
    }

    /// `A ↦ S⁻¹AᵀS`
    #[staticmethod]
    fn transpose_conjugation(s: Rows) -> PyResult<Self> {
        Ok(Self(
            ence_core::Superoperator::transpose_conjugation(&to_cmatrix(s)?).map_err(err)?,
        ))
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    fn matrix(&self) -> Rows {
        to_rows(self.0.matrix())
    }

    fn apply(&self, a: Rows) -> PyResult<Rows> {
        Ok(to_rows(&self.0.apply(&to_cmatrix(a)?).map_err(err)?))
    }

    /// `(I⊗Λ)ρ` for `side="B"`, `(Λ⊗I)ρ` for `side="A"`.
    #[pyo3(signature = (rho, dims, side = "B"))]
    fn apply_partial(&self, rho: Rows, dims: (usize, usize), side: &str) -> PyResult<Rows> {
        let out = self
            .0
            .apply_partial(&to_cmatrix(rho)?, self::dims(dims)?, self::side(side)?)
            .map_err(err)?;
        Ok(to_rows(&out))
    }

    /// `self ∘ inner`
    fn compose(&self, inner: &PySuperoperator) -> PyResult<Self> {
        Ok(Self(self.0.compose(&inner.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Superoperator(d={})", self.0.d())
    }
}

#[pyfunction]
fn tensor(a: Rows, b: Rows) -> PyResult<Rows> {
    Ok(to_rows(&linalg::tensor(&to_cmatrix(a)?, &to_cmatrix(b)?)))
}

#[pyfunction]
#[pyo3(signature = (rho, dims, side = "B"))]
fn partial_transpose(rho: Rows, dims: (usize, usize), side: &str) -> PyResult<Rows> {
    let out = linalg::partial_transpose(&to_cmatrix(rho)?, self::dims(dims)?, self::side(side)?).map_err(err)?;
    Ok(to_rows(&out))
}

/// Traces out `side`.
#[pyfunction]
#[pyo3(signature = (rho, dims, side = "B"))]
fn partial_trace(rho: Rows, dims: (usize, usize), side: &str) -> PyResult<Rows> {
    let out = linalg::partial_trace(&to_cmatrix(rho)?, self::dims(dims)?, self::side(side)?).map_err(err)?;
    Ok(to_rows(&out))
}

/// Eigenvalues of a Hermitian matrix, descending.
#[pyfunction]
fn eigvals_herm(h: Rows) -> PyResult<Vec<f64>> {
    Ok(linalg::eig_herm(&to_cmatrix(h)?).map_err(err)?.real_values())
}

/// Eigenvalues of a general matrix in canonical order.
#[pyfunction]
fn eig_general(m: Rows) -> PyResult<Vec<Complex64>> {
    Ok(values(&linalg::eig_general(&to_cmatrix(m)?).map_err(err)?))
}

#[pyfunction]
fn spectra_equal(a: Vec<Complex64>, b: Vec<Complex64>, tol: f64) -> PyResult<bool> {
    linalg::spectra_equal(&Spectrum::new(a), &Spectrum::new(b), tol).map_err(err)
}

#[pyfunction]
fn bell_state() -> Rows {
    to_rows(states::bell_state().as_cmatrix())
}

/// `(1 − p)·I/4 + p·|Φ⁺⟩⟨Φ⁺|`
#[pyfunction]
fn rho_p(p: f64) -> PyResult<Rows> {
    Ok(to_rows(states::rho_p(p, &states::bell_state()).map_err(err)?.as_cmatrix()))
}

#[pyfunction]
#[pyo3(signature = (d, rank = None, seed = 0))]
fn random_density(d: usize, rank: Option<usize>, seed: u64) -> PyResult<Rows> {
    let rho = states::random_density(d, rank.unwrap_or(d), Seed(seed)).map_err(err)?;
    Ok(to_rows(rho.as_cmatrix()))
}

#[pyfunction]
#[pyo3(signature = (dims, seed = 0))]
fn random_pcc_state(dims: (usize, usize), seed: u64) -> PyResult<Rows> {
    let spec = states::random_pcc_spec(self::dims(dims)?, Seed(seed)).map_err(err)?;
    Ok(to_rows(states::pcc_state(&spec).map_err(err)?.as_cmatrix()))
}

#[pyfunction]
#[pyo3(signature = (dims, seed = 0))]
fn random_onewcc_state(dims: (usize, usize), seed: u64) -> PyResult<Rows> {
    let spec = states::random_onewcc_spec(self::dims(dims)?, Seed(seed)).map_err(err)?;
    Ok(to_rows(states::onewcc_state(&spec).map_err(err)?.as_cmatrix()))
}

#[pyfunction]
#[pyo3(signature = (d, max_cond = 100.0, seed = 0))]
fn random_invertible(d: usize, max_cond: f64, seed: u64) -> PyResult<Rows> {
    Ok(to_rows(&states::random_invertible(d, max_cond, Seed(seed)).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (rho, dims, side = "B", tol = 1e-8))]
fn pt_detect<'py>(
    py: Python<'py>,
    rho: Rows,
    dims: (usize, usize),
    side: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = detect::pt_detect(&to_density(rho)?, self::dims(dims)?, self::side(side)?, tol).map_err(err)?;
    detection_dict(py, &r)
}

/// Commutation test with `classical_side` classical.
#[pyfunction]
#[pyo3(signature = (rho, dims, classical_side = "B", tol = 1e-8))]
fn chen_test<'py>(
    py: Python<'py>,
    rho: Rows,
    dims: (usize, usize),
    classical_side: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = detect::chen_test(&to_density(rho)?, self::dims(dims)?, side(classical_side)?, tol).map_err(err)?;
    commutation_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (rho, dims, tol = 1e-8))]
fn pcc_test(rho: Rows, dims: (usize, usize), tol: f64) -> PyResult<bool> {
    detect::pcc_test(&to_density(rho)?, self::dims(dims)?, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho, dims, side = "B"))]
fn ncc_measure(rho: Rows, dims: (usize, usize), side: &str) -> PyResult<f64> {
    detect::ncc_measure(&to_density(rho)?, self::dims(dims)?, self::side(side)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l, tol = 1e-8))]
fn check_unital(l: &PySuperoperator, tol: f64) -> bool {
    preserver::check_unital(&l.0, tol)
}

#[pyfunction]
#[pyo3(signature = (l, samples = 200, seed = 0, tol = 1e-8))]
fn check_det_trace(l: &PySuperoperator, samples: usize, seed: u64, tol: f64) -> PyResult<bool> {
    preserver::check_det_trace(&l.0, samples, Seed(seed), tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l, samples = 200, seed = 0, tol = 1e-8))]
fn check_ep_on_density<'py>(
    py: Python<'py>,
    l: &PySuperoperator,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = preserver::check_ep_on_density(&l.0, samples, Seed(seed), tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("unital", r.unital)?;
    d.set_item("det_trace_preserving", r.det_trace_preserving)?;
    d.set_item("ep_on_samples", r.ep_on_samples)?;
    d.set_item("worst_spectrum_deviation", r.worst_spectrum_deviation)?;
    d.set_item("samples_tested", r.samples_tested)?;
    Ok(d)
}

/// Returns `(kind, S or None, residual)` with kind one of
/// `"Similarity"`, `"TransposeSimilarity"`, `"NotEP"`.
#[pyfunction]
#[pyo3(signature = (l, tol = 1e-8))]
fn classify_preserver(l: &PySuperoperator, tol: f64) -> (&'static str, Option<Rows>, f64) {
    let form = preserver::classify_preserver(&l.0, tol);
    let kind = match form.kind {
        MapKind::Similarity => "Similarity",
        MapKind::TransposeSimilarity => "TransposeSimilarity",
        MapKind::NotEp => "NotEP",
    };
    (kind, form.s.as_ref().map(to_rows), form.residual)
}

#[pyfunction]
#[pyo3(signature = (l, d_a, trials = 50, seed = 0, tol = 1e-8))]
fn verify_main_theorem<'py>(
    py: Python<'py>,
    l: &PySuperoperator,
    d_a: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = preserver::verify_main_theorem(&l.0, d_a, trials, Seed(seed), tol).map_err(err)?;
    let d = PyDict::new(py);
    let branch = match r.branch {
        Branch::IdentityBranch => "IdentityBranch",
        Branch::TransposeBranch => "TransposeBranch",
        Branch::Violated => "Violated",
    };
    d.set_item("branch", branch)?;
    d.set_item("trials", r.trials)?;
    d.set_item("max_deviation", r.max_deviation)?;
    d.set_item("identity_max_deviation", r.identity_max_deviation)?;
    d.set_item("transpose_max_deviation", r.transpose_max_deviation)?;
    Ok(d)
}

#[pymodule]
fn ence(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySuperoperator>()?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(partial_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(partial_trace, m)?)?;
    m.add_function(wrap_pyfunction!(eigvals_herm, m)?)?;
    m.add_function(wrap_pyfunction!(eig_general, m)?)?;
    m.add_function(wrap_pyfunction!(spectra_equal, m)?)?;
    m.add_function(wrap_pyfunction!(bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(rho_p, m)?)?;
    m.add_function(wrap_pyfunction!(random_density, m)?)?;
    m.add_function(wrap_pyfunction!(random_pcc_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_onewcc_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_invertible, m)?)?;
    m.add_function(wrap_pyfunction!(pt_detect, m)?)?;
    m.add_function(wrap_pyfunction!(chen_test, m)?)?;
    m.add_function(wrap_pyfunction!(pcc_test, m)?)?;
    m.add_function(wrap_pyfunction!(ncc_measure, m)?)?;
    m.add_function(wrap_pyfunction!(check_unital, m)?)?;
    m.add_function(wrap_pyfunction!(check_det_trace, m)?)?;
    m.add_function(wrap_pyfunction!(check_ep_on_density, m)?)?;
    m.add_function(wrap_pyfunction!(classify_preserver, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main_theorem, m)?)?;
    m.add("RNG_ALGORITHM", states::RNG_ALGORITHM)?;
    Ok(())
}
