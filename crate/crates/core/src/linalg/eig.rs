use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{CMatrix, Spectrum, ZERO};
use crate::error::{Error, Result};
use crate::tol::{scaled, Tolerances};

/// Eigenvalues with eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigSystem {
    pub spectrum: Spectrum,
    pub right_vectors: CMatrix,
    pub left_vectors: Option<CMatrix>,
}

impl EigSystem {
    /// Real parts of the eigenvalues, in the stored order.
    pub fn real_values(&self) -> Vec<f64> {
        self.spectrum.values().iter().map(|z| z.re).collect()
    }
}

const HERM_MAX_SWEEPS: usize = 10_000;

fn symmetric_eigen(h: &CMatrix, tol_herm: f64) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let deviation = h.hermiticity_defect();
    if deviation > scaled(tol_herm, h.max_abs()) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (h.as_matrix() + h.as_matrix().adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::try_new(sym, f64::EPSILON, HERM_MAX_SWEEPS).ok_or(Error::NoConvergence {
        iterations: HERM_MAX_SWEEPS,
    })
}

/// Descending eigenvalues of a Hermitian matrix.
pub fn eigvals_herm(h: &CMatrix, tol_herm: f64) -> Result<Vec<f64>> {
    let eig = symmetric_eigen(h, tol_herm)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Hermitian eigendecomposition with the default Hermiticity tolerance.
pub fn eig_herm(h: &CMatrix) -> Result<EigSystem> {
    eig_herm_with_tol(h, Tolerances::default().herm)
}

/// Hermitian eigendecomposition: real eigenvalues in descending order and
/// orthonormal eigenvectors in matching column order.
pub fn eig_herm_with_tol(h: &CMatrix, tol_herm: f64) -> Result<EigSystem> {
    let eig = symmetric_eigen(h, tol_herm)?;
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<Complex64> = order
        .iter()
        .map(|&k| Complex64::new(eig.eigenvalues[k], 0.0))
        .collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigSystem {
        spectrum: Spectrum::new(values),
        right_vectors: CMatrix::from_matrix_unchecked(vectors),
        left_vectors: None,
    })
}

/// All eigenvalues of a general complex matrix, with algebraic multiplicity.
///
/// Reduces to upper Hessenberg form and runs shifted complex QR until the
/// matrix is triangular. Eigenvectors are not computed, so defective inputs
/// are fine.
pub fn eig_general(m: &CMatrix) -> Result<Spectrum> {
    let n = m.dim();
    if n == 1 {
        return Ok(Spectrum::new(vec![m[(0, 0)]]));
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(Spectrum::new(vec![ZERO; n]));
    }
    let mut h = m.as_matrix() / Complex64::new(scale, 0.0);
    reduce_to_hessenberg(&mut h);
    let mut values = hessenberg_qr(&mut h)?;
    for v in &mut values {
        *v *= scale;
    }
    Ok(Spectrum::new(values))
}

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// In-place Householder reduction to upper Hessenberg form (similarity).
fn reduce_to_hessenberg(h: &mut DMatrix<Complex64>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let col: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha_norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 || col[1..].iter().all(|z| *z == ZERO) {
            continue;
        }
        let phase = if col[0] == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            col[0] / col[0].norm()
        };
        // v = x + phase·‖x‖·e1, reflector P = I − 2vv†/(v†v).
        let mut v = col;
        v[0] += phase * alpha_norm;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm_sqr;

        // H ← P H
        for j in 0..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(ZERO, |acc, (r, vr)| acc + vr.conj() * h[(k + 1 + r, j)]);
            let f = dot * beta;
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * f;
            }
        }
        // H ← H P
        for i in 0..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(ZERO, |acc, (r, vr)| acc + h[(i, k + 1 + r)] * vr);
            let f = dot * beta;
            for (r, vr) in v.iter().enumerate() {
                h[(i, k + 1 + r)] -= f * vr.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Givens rotation `G = [[c, s], [−s̄, c]]` with real `c` such that
/// `G·[x, y]ᵀ = [r, 0]ᵀ`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let r = x.norm().hypot(y.norm());
    let alpha = x / x.norm();
    (x.norm() / r, alpha * y.conj() / r)
}

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Single-shift implicit QR on an upper Hessenberg matrix. Only the active
/// diagonal window is updated, which is enough for eigenvalues.
fn hessenberg_qr(h: &mut DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut eig = vec![ZERO; n];
    let ulp = f64::EPSILON;
    let budget = MAX_ITER_PER_EIGENVALUE * n.max(1);
    let mut total_iter = 0;
    let mut hi = n - 1;
    let mut its = 0;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }

        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)];
            let mut s = cabs1(h[(lo - 1, lo - 1)]) + cabs1(h[(lo, lo)]);
            if s == 0.0 {
                s = (lo.saturating_sub(1)..=hi)
                    .map(|i| cabs1(h[(i, i)]) + if i > 0 { cabs1(h[(i, i - 1)]) } else { 0.0 })
                    .sum();
            }
            if cabs1(sub) <= ulp * s || cabs1(sub) < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }

        total_iter += 1;
        its += 1;
        if total_iter > budget {
            return Err(Error::NoConvergence {
                iterations: total_iter,
            });
        }

        let shift = if its % 10 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * cabs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let first_col = if k > lo { k - 1 } else { lo };
            for j in first_col..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            let last_row = (k + 2).min(hi);
            for i in lo..=last_row {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
