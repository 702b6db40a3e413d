//! Independent numerical oracles used only by tests.

#![allow(dead_code)]

use ence_core::{CMatrix, Complex64};

/// Eigenvalues (descending) of a Hermitian matrix via cyclic Jacobi on the
/// real symmetric embedding `[[X, −Y], [Y, X]]` of `H = X + iY`; every
/// eigenvalue of `H` appears twice in the embedding.
pub fn jacobi_hermitian_eigvals(h: &CMatrix) -> Vec<f64> {
    let n = h.dim();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    vals.into_iter().step_by(2).collect()
}

/// Characteristic polynomial coefficients `[1, c_1, …, c_n]` of
/// `det(λI − M) = λⁿ + c_1 λⁿ⁻¹ + … + c_n` by Faddeev–LeVerrier.
pub fn charpoly(m: &CMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut mk = CMatrix::zeros(n);
    for k in 1..=n {
        let prev = *coeffs.last().unwrap();
        let shifted = &mk + &CMatrix::identity(n).scale(prev);
        mk = m * &shifted;
        let c = -mk.trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..5000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}
