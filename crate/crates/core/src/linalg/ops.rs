use num_complex::Complex64;

use super::{BipartiteDims, CMatrix, Side, ZERO};
use crate::error::Result;

/// Kronecker product with `a` as the major factor:
/// `(a⊗b)[i·n_b + k, j·n_b + l] = a[i, j]·b[k, l]`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_matrix_unchecked(a.as_matrix().kronecker(b.as_matrix()))
}

/// Transposes the chosen tensor factor of `rho`.
pub fn partial_transpose(rho: &CMatrix, dims: BipartiteDims, side: Side) -> Result<CMatrix> {
    dims.check(rho)?;
    let (da, db) = (dims.d_a, dims.d_b);
    let mut out = CMatrix::zeros(rho.dim());
    for i in 0..da {
        for ip in 0..da {
            for k in 0..db {
                for l in 0..db {
                    let src = match side {
                        Side::B => (i * db + l, ip * db + k),
                        Side::A => (ip * db + k, i * db + l),
                    };
                    out[(i * db + k, ip * db + l)] = rho[src];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out subsystem `side`, returning the reduced matrix on the other one.
pub fn partial_trace(rho: &CMatrix, dims: BipartiteDims, side: Side) -> Result<CMatrix> {
    dims.check(rho)?;
    let (da, db) = (dims.d_a, dims.d_b);
    let out = match side {
        Side::B => CMatrix::from_fn(da, |i, ip| {
            (0..db).fold(ZERO, |acc, k| acc + rho[(i * db + k, ip * db + k)])
        }),
        Side::A => CMatrix::from_fn(db, |k, l| {
            (0..da).fold(ZERO, |acc, i| acc + rho[(i * db + k, i * db + l)])
        }),
    };
    Ok(out)
}

/// Splits `m = h1 + i·h2` with `h1 = (m + m†)/2` and `h2 = (m − m†)/(2i)`.
pub fn cartesian_decompose(m: &CMatrix) -> (CMatrix, CMatrix) {
    let adj = m.adjoint();
    let h1 = (m + &adj).scale_real(0.5);
    let h2 = (m - &adj).scale(Complex64::new(0.0, -0.5));
    (h1, h2)
}
