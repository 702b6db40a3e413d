//! Linear maps on `M_d(ℂ)` as superoperator matrices.
//!
//! A superoperator acts on column-stacked matrices, `vec(A)[i + j·d] = A[i, j]`,
//! so that `vec(AXB) = (Bᵀ⊗A)·vec(X)`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{tensor, BipartiteDims, CMatrix, Side, ONE};

/// Largest condition number accepted for the matrix `S` of a conjugation.
pub const CONDITION_CAP: f64 = 1e8;

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    d: usize,
    mat: CMatrix,
}

impl Superoperator {
    /// Wraps a `d²×d²` matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let n = mat.dim();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::InvalidParameter(format!(
                "superoperator dimension {n} is not a perfect square"
            )));
        }
        Ok(Self { d, mat })
    }

    /// Builds the superoperator of `f` from its action on the matrix units
    /// `E_ij`; `f` must be linear for the result to represent it.
    pub fn from_map(d: usize, mut f: impl FnMut(&CMatrix) -> CMatrix) -> Result<Self> {
        let n = d * d;
        let mut mat = CMatrix::zeros(n);
        for j in 0..d {
            for i in 0..d {
                let mut unit = CMatrix::zeros(d);
                unit[(i, j)] = ONE;
                let image = f(&unit);
                if image.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: image.dim(),
                    });
                }
                let col = image.vec();
                for r in 0..n {
                    mat[(r, i + j * d)] = col[r];
                }
            }
        }
        Ok(Self { d, mat })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            mat: CMatrix::identity(d * d),
        }
    }

    /// `A ↦ S⁻¹AS`, i.e. `Sᵀ ⊗ S⁻¹`.
    pub fn conjugation(s: &CMatrix) -> Result<Self> {
        let inv = s.inverse_checked(CONDITION_CAP)?;
        Ok(Self {
            d: s.dim(),
            mat: tensor(&s.transpose(), &inv),
        })
    }

    /// Matrix transposition: the commutation matrix `K_d`.
    pub fn transpose(d: usize) -> Self {
        let mut mat = CMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                mat[(i + j * d, j + i * d)] = ONE;
            }
        }
        Self { d, mat }
    }

    /// `A ↦ S⁻¹AᵀS`.
    pub fn transpose_conjugation(s: &CMatrix) -> Result<Self> {
        Self::conjugation(s)?.compose(&Self::transpose(s.dim()))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Superoperator) -> Result<Superoperator> {
        if self.d != inner.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: inner.d,
            });
        }
        Ok(Self {
            d: self.d,
            mat: &self.mat * &inner.mat,
        })
    }

    pub fn scale(&self, c: f64) -> Superoperator {
        Self {
            d: self.d,
            mat: self.mat.scale_real(c),
        }
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: a.dim(),
            });
        }
        let v: DVector<_> = self.mat.as_matrix() * a.vec();
        CMatrix::unvec(&v)
    }

    /// Applies the map to one tensor factor of `rho`, block by block.
    ///
    /// For `side = B` every `d_b×d_b` block `⟨i|ρ|i'⟩` is replaced by its
    /// image; for `side = A` the same is done for the `d_a×d_a` blocks
    /// `⟨k|ρ|l⟩` taken over subsystem B.
    pub fn apply_partial(&self, rho: &CMatrix, dims: BipartiteDims, side: Side) -> Result<CMatrix> {
        if rho.dim() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                actual: rho.dim(),
            });
        }
        if dims.of(side) != self.d {
            return Err(Error::DimensionMismatch {
                expected: dims.of(side),
                actual: self.d,
            });
        }
        let (da, db) = (dims.d_a, dims.d_b);
        let mut out = CMatrix::zeros(rho.dim());
        match side {
            Side::B => {
                for i in 0..da {
                    for ip in 0..da {
                        let block = CMatrix::from_fn(db, |k, l| rho[(i * db + k, ip * db + l)]);
                        let image = self.apply(&block)?;
                        for k in 0..db {
                            for l in 0..db {
                                out[(i * db + k, ip * db + l)] = image[(k, l)];
                            }
                        }
                    }
                }
            }
            Side::A => {
                for k in 0..db {
                    for l in 0..db {
                        let block = CMatrix::from_fn(da, |i, ip| rho[(i * db + k, ip * db + l)]);
                        let image = self.apply(&block)?;
                        for i in 0..da {
                            for ip in 0..da {
                                out[(i * db + k, ip * db + l)] = image[(i, ip)];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Λ(I)`.
    pub fn image_of_identity(&self) -> CMatrix {
        self.apply(&CMatrix::identity(self.d))
            .expect("identity has the map's dimension")
    }

    /// Largest entry of `self.matrix() − other.matrix()`.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}
