//! Dense complex linear algebra on square matrices.
//!
//! Bipartite matrices always use subsystem A as the major (slow) index:
//! row `(i, k)` of a `d_a·d_b` matrix is `i·d_b + k`.

mod density;
mod eig;
mod ops;
mod spectrum;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use density::{BipartiteDims, DensityMatrix, Side};
pub use eig::{eig_general, eig_herm, eig_herm_with_tol, eigvals_herm, EigSystem};
pub use ops::{cartesian_decompose, partial_trace, partial_transpose, tensor};
pub use spectrum::{matching_distance, spectra_equal, Spectrum};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense, square, finite complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<Complex64>);

impl CMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(dim: usize, data: &[Complex64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Column-stacked vectorization: `vec(A)[i + j·d] = A[i, j]`.
    pub fn vec(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    pub fn unvec(v: &DVector<Complex64>) -> Result<Self> {
        let dim = (v.len() as f64).sqrt().round() as usize;
        if dim * dim != v.len() {
            return Err(Error::InvalidParameter(format!(
                "vector of length {} is not a vectorized square matrix",
                v.len()
            )));
        }
        Self::new(DMatrix::from_column_slice(dim, dim, v.as_slice()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.conjugate())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_max`. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `tol·max(1, ‖self‖_max)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= crate::tol::scaled(tol, self.max_abs())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = self.adjoint().matmul(self);
        gram.max_abs_diff(&Self::identity(self.dim())) <= tol
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        Self(&self.0 * &other.0)
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.0.clone().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Spectral condition number; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        let (max, min) = (s[0], s[s.len() - 1]);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Inverse, refused when the condition number exceeds `cond_cap`.
    pub fn inverse_checked(&self, cond_cap: f64) -> Result<CMatrix> {
        let condition = self.condition_number();
        if !(condition <= cond_cap) {
            return Err(Error::IllConditioned {
                condition,
                cap: cond_cap,
            });
        }
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or(Error::IllConditioned {
                condition,
                cap: cond_cap,
            })
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)].norm() <= tol))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix{:?}", self.0)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: Complex64) -> CMatrix {
        self.scale(rhs)
    }
}
