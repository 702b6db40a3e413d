//! Eigenvalue-preservation checks for linear maps, recovery of the
//! similarity / transpose-similarity form, and empirical verification that
//! partial application of such a map changes spectra exactly like the
//! identity or the partial transpose.
//!
//! All sampling-based verdicts mean "no counterexample among the samples".

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_general, eig_herm, matching_distance, partial_transpose, spectra_equal, tensor,
    BipartiteDims, CMatrix, DensityMatrix, Side, ONE, ZERO,
};
use crate::maps::{Superoperator, CONDITION_CAP};
use crate::states::{random_density, Seed};

/// Samples drawn when checking the EP precondition of [`verify_main_theorem`].
pub const EP_PRECHECK_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpReport {
    pub unital: bool,
    pub det_trace_preserving: bool,
    /// No sampled density matrix had its spectrum changed beyond tolerance.
    pub ep_on_samples: bool,
    pub worst_spectrum_deviation: f64,
    pub samples_tested: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    /// `A ↦ S⁻¹AS`
    Similarity,
    /// `A ↦ S⁻¹AᵀS`
    TransposeSimilarity,
    #[serde(rename = "NotEP")]
    NotEp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapForm {
    pub kind: MapKind,
    /// Recovered `S`, gauge-fixed to `|det S| = 1` with its first
    /// significant entry (row-major) real and positive.
    pub s: Option<CMatrix>,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    IdentityBranch,
    TransposeBranch,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub branch: Branch,
    pub trials: usize,
    /// Deviation of the reported branch; for `Violated`, the worst over
    /// trials of the smaller of the two deviations.
    pub max_deviation: f64,
    pub identity_max_deviation: f64,
    pub transpose_max_deviation: f64,
}

/// The `k`-th sampled density matrix: half full rank, a quarter pure, a
/// quarter of rank `⌈d/2⌉`.
pub fn sample_density(d: usize, k: usize, seed: Seed) -> Result<DensityMatrix> {
    let rank = match k % 4 {
        0 | 1 => d,
        2 => 1,
        _ => d.div_ceil(2),
    };
    random_density(d, rank, seed.derive(k as u64))
}

fn require_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    Ok(())
}

/// `‖Λ(I) − I‖_max ≤ tol`.
pub fn check_unital(l: &Superoperator, tol: f64) -> bool {
    l.image_of_identity().max_abs_diff(&CMatrix::identity(l.d())) <= tol
}

/// Determinant and trace of every sampled density matrix are preserved
/// within `tol` (absolute).
pub fn check_det_trace(l: &Superoperator, samples: usize, seed: Seed, tol: f64) -> Result<bool> {
    require_samples(samples)?;
    for k in 0..samples {
        let rho = sample_density(l.d(), k, seed)?.into_cmatrix();
        let image = l.apply(&rho)?;
        if (image.determinant() - rho.determinant()).norm() > tol
            || (image.trace() - rho.trace()).norm() > tol
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares the spectrum of `Λ(ρ)` (general eigenvalues) with that of `ρ`
/// over sampled density matrices, together with the unitality and
/// determinant/trace checks on the same samples.
pub fn check_ep_on_density(l: &Superoperator, samples: usize, seed: Seed, tol: f64) -> Result<EpReport> {
    require_samples(samples)?;
    let mut ep = true;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let rho = sample_density(l.d(), k, seed)?.into_cmatrix();
        let before = eig_herm(&rho)?.spectrum;
        let after = eig_general(&l.apply(&rho)?)?;
        if !spectra_equal(&after, &before, tol)? {
            ep = false;
        }
        worst = worst.max(matching_distance(&after, &before)?);
    }
    Ok(EpReport {
        unital: check_unital(l, tol),
        det_trace_preserving: check_det_trace(l, samples, seed, tol)?,
        ep_on_samples: ep,
        worst_spectrum_deviation: worst,
        samples_tested: samples,
    })
}

/// Rank-1 nearest-Kronecker-product factors of `m ≈ X⊗Y` (both `d×d`),
/// with `‖R − σ₁uv†‖_F / σ₁` of the rearranged matrix `R` as a rank
/// certificate (an upper bound on `σ₂/σ₁`).
fn nearest_kronecker(m: &CMatrix, d: usize) -> Option<(CMatrix, CMatrix, f64)> {
    // R[i + j·d, k + l·d] = M[i·d + k, j·d + l], so that X⊗Y ↦ vec(X)·vec(Y)ᵀ.
    let n = d * d;
    let mut r = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    r[(i + j * d, k + l * d)] = m[(i * d + k, j * d + l)];
                }
            }
        }
    }
    // Dominant left singular vector from R·R†, then one power step each way.
    // nalgebra's complex SVD can return inaccurate singular vectors for
    // exactly rank-1 input, so it is not used here.
    let gram = CMatrix::from_matrix_unchecked(&r * r.adjoint());
    let sys = eig_herm(&gram).ok()?;
    let u0 = sys.right_vectors.as_matrix().column(0).into_owned();
    let v = r.adjoint() * &u0;
    let v_norm = v.norm();
    if v_norm == 0.0 {
        return None;
    }
    let v = v / Complex64::new(v_norm, 0.0);
    let ru = &r * &v;
    let sigma1 = ru.norm();
    let u = ru / Complex64::new(sigma1, 0.0);
    let tail = (&r - (&u * v.adjoint()) * Complex64::new(sigma1, 0.0)).norm();
    let root = Complex64::new(sigma1.sqrt(), 0.0);
    let x = CMatrix::unvec(&(&u * root)).ok()?;
    let y = CMatrix::unvec(&(v.conjugate() * root)).ok()?;
    Some((x, y, tail / sigma1))
}

/// Attempts `m = Sᵀ⊗S⁻¹`. Returns the residual (max of the rank ratio and the
/// relative Frobenius reconstruction error) and the candidate `S`.
fn fit_similarity(m: &CMatrix, d: usize) -> (f64, Option<CMatrix>) {
    let norm = m.frobenius_norm();
    let Some((x, _y, ratio)) = nearest_kronecker(m, d) else {
        return (1.0, None);
    };
    let s = x.transpose();
    let Ok(inv) = s.inverse_checked(CONDITION_CAP) else {
        return (ratio.max(1.0), None);
    };
    let rebuilt = tensor(&s.transpose(), &inv);
    let recon = (m - &rebuilt).frobenius_norm() / norm;
    (ratio.max(recon), Some(s))
}

/// Fixes the free scalar of `S`: unit `|det S|`, first entry above
/// `1e-8·‖S‖_max` (row-major) real positive.
pub fn gauge_fix(s: &CMatrix) -> CMatrix {
    let d = s.dim() as f64;
    let det = s.determinant().norm();
    let mut out = if det > 0.0 {
        s.scale_real(det.powf(-1.0 / d))
    } else {
        s.clone()
    };
    let threshold = 1e-8 * out.max_abs();
    if let Some(z) = out.to_row_major().into_iter().find(|z| z.norm() > threshold) {
        out = out.scale(z.conj() / z.norm());
    }
    out
}

/// Decides whether `l` is `A ↦ S⁻¹AS` or `A ↦ S⁻¹AᵀS` for some invertible
/// `S`, recovering `S` up to the gauge of [`gauge_fix`].
pub fn classify_preserver(l: &Superoperator, tol: f64) -> MapForm {
    let d = l.d();
    let m = l.matrix();
    if m.frobenius_norm() == 0.0 {
        return MapForm {
            kind: MapKind::NotEp,
            s: None,
            residual: 1.0,
        };
    }
    let (res_sim, s_sim) = fit_similarity(m, d);
    if res_sim <= tol {
        if let Some(s) = s_sim {
            return MapForm {
                kind: MapKind::Similarity,
                s: Some(gauge_fix(&s)),
                residual: res_sim,
            };
        }
    }
    // l = conj(S)∘T  ⇔  l∘T = conj(S), since T is an involution.
    let untransposed = l
        .compose(&Superoperator::transpose(d))
        .expect("same dimension");
    let (res_t, s_t) = fit_similarity(untransposed.matrix(), d);
    if res_t <= tol {
        if let Some(s) = s_t {
            return MapForm {
                kind: MapKind::TransposeSimilarity,
                s: Some(gauge_fix(&s)),
                residual: res_t,
            };
        }
    }
    MapForm {
        kind: MapKind::NotEp,
        s: None,
        residual: res_sim.min(res_t),
    }
}

/// Least-squares scalar `c` minimizing `‖c·estimate − target‖_F`.
pub fn calibrate_scalar(estimate: &CMatrix, target: &CMatrix) -> Complex64 {
    let (num, den) = estimate
        .as_matrix()
        .iter()
        .zip(target.as_matrix().iter())
        .fold((ZERO, 0.0), |(num, den), (e, t)| (num + e.conj() * t, den + e.norm_sqr()));
    if den == 0.0 {
        ONE
    } else {
        num / den
    }
}

/// Checks over random bipartite states whether `(I⊗Λ)ρ` always has the
/// spectrum of `ρ` or always that of the partial transpose of `ρ`.
pub fn verify_main_theorem(
    l: &Superoperator,
    d_a: usize,
    trials: usize,
    seed: Seed,
    tol: f64,
) -> Result<MainTheoremReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let dims = BipartiteDims::new(d_a, l.d())?;
    let pre = check_ep_on_density(l, EP_PRECHECK_SAMPLES, seed.derive(u64::MAX - 1), tol)?;
    if !pre.ep_on_samples {
        return Err(Error::NotEigenvaluePreserving {
            deviation: pre.worst_spectrum_deviation,
        });
    }

    let mut all_identity = true;
    let mut all_transpose = true;
    let (mut dev_id_max, mut dev_t_max, mut dev_best_max) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..trials {
        let rho = sample_density(dims.total(), k, seed)?.into_cmatrix();
        let after = eig_general(&l.apply_partial(&rho, dims, Side::B)?)?;
        let before = eig_herm(&rho)?.spectrum;
        let transposed = eig_herm(&partial_transpose(&rho, dims, Side::B)?)?.spectrum;
        let dev_id = matching_distance(&after, &before)?;
        let dev_t = matching_distance(&after, &transposed)?;
        all_identity &= dev_id <= tol;
        all_transpose &= dev_t <= tol;
        dev_id_max = dev_id_max.max(dev_id);
        dev_t_max = dev_t_max.max(dev_t);
        dev_best_max = dev_best_max.max(dev_id.min(dev_t));
    }
    let (branch, max_deviation) = if all_identity {
        (Branch::IdentityBranch, dev_id_max)
    } else if all_transpose {
        (Branch::TransposeBranch, dev_t_max)
    } else {
        (Branch::Violated, dev_best_max)
    };
    Ok(MainTheoremReport {
        branch,
        trials,
        max_deviation,
        identity_max_deviation: dev_id_max,
        transpose_max_deviation: dev_t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ginibre, random_invertible, random_unitary};

    fn replacement(d: usize) -> Superoperator {
        // Λ(ρ) = tr(ρ)·I/d
        Superoperator::from_map(d, |a| CMatrix::identity(d).scale(a.trace() / d as f64)).unwrap()
    }

    #[test]
    fn unitality_examples() {
        let s = random_invertible(3, 40.0, Seed(1)).unwrap();
        assert!(check_unital(&Superoperator::conjugation(&s).unwrap(), 1e-10));
        assert!(check_unital(&Superoperator::transpose(3), 0.0));
        assert!(!check_unital(&Superoperator::identity(3).scale(2.0), 1e-8));
    }

    #[test]
    fn det_trace_examples() {
        let s = random_invertible(3, 40.0, Seed(2)).unwrap();
        let conj = Superoperator::conjugation(&s).unwrap();
        assert!(check_det_trace(&Superoperator::transpose(3), 20, Seed(3), 1e-10).unwrap());
        assert!(check_det_trace(&conj, 20, Seed(3), 1e-10).unwrap());
        // Direct determinant oracle: det(S⁻¹ρS) = det(S⁻¹)·det(ρ)·det(S).
        let rho = sample_density(3, 0, Seed(3)).unwrap().into_cmatrix();
        let inv = s.inverse_checked(1e8).unwrap();
        let lhs = inv.determinant() * rho.determinant() * s.determinant();
        assert!((lhs - rho.determinant()).norm() < 1e-12);

        assert!(!check_det_trace(&Superoperator::identity(3).scale(2.0), 5, Seed(3), 1e-8).unwrap());
        assert!(check_det_trace(&conj, 0, Seed(3), 1e-8).is_err());
    }

    #[test]
    fn ep_examples() {
        let s = random_invertible(4, 100.0, Seed(4)).unwrap();
        let report = check_ep_on_density(&Superoperator::conjugation(&s).unwrap(), 40, Seed(5), 1e-8).unwrap();
        assert!(report.ep_on_samples && report.unital && report.det_trace_preserving);
        assert_eq!(report.samples_tested, 40);
        assert!(report.worst_spectrum_deviation < 1e-10);

        let report = check_ep_on_density(&Superoperator::transpose(4), 40, Seed(5), 1e-8).unwrap();
        assert!(report.ep_on_samples);

        let report = check_ep_on_density(&replacement(3), 8, Seed(6), 1e-8).unwrap();
        assert!(!report.ep_on_samples);
        assert!(report.unital, "trace-and-replace is unital but not EP");
        assert!(report.worst_spectrum_deviation > 0.01);
    }

    #[test]
    fn classify_identity_and_transpose() {
        let form = classify_preserver(&Superoperator::identity(3), 1e-8);
        assert_eq!(form.kind, MapKind::Similarity);
        assert!(form.residual <= 1e-10);
        assert!(form.s.unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-10);

        let form = classify_preserver(&Superoperator::transpose(3), 1e-8);
        assert_eq!(form.kind, MapKind::TransposeSimilarity);
        assert!(form.s.unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn classify_recovers_unitary_transpose_conjugation() {
        for seed in 0..5 {
            let u = random_unitary(3, Seed(seed)).unwrap();
            let l = Superoperator::transpose_conjugation(&u).unwrap();
            let form = classify_preserver(&l, 1e-8);
            assert_eq!(form.kind, MapKind::TransposeSimilarity);
            assert!(form.residual <= 1e-8);
            let s_hat = form.s.unwrap();
            let c = calibrate_scalar(&s_hat, &u);
            assert!((&s_hat.scale(c) - &u).frobenius_norm() <= 1e-8);
        }
    }

    #[test]
    fn classify_rejects_non_ep() {
        assert_eq!(classify_preserver(&replacement(3), 1e-8).kind, MapKind::NotEp);
        assert_eq!(
            classify_preserver(&Superoperator::identity(2).scale(2.0), 1e-8).kind,
            MapKind::NotEp
        );
        let zero = Superoperator::identity(2).scale(0.0);
        assert_eq!(classify_preserver(&zero, 1e-8).kind, MapKind::NotEp);

        let mut rng = Seed(9).rng();
        let noise = CMatrix::new(ginibre(9, 9, &mut rng)).unwrap();
        let noise = noise.scale_real(1e-3 / noise.frobenius_norm());
        let l = Superoperator::new(&Superoperator::transpose(3).into_matrix() + &noise).unwrap();
        let form = classify_preserver(&l, 1e-8);
        assert_eq!(form.kind, MapKind::NotEp);
        assert!(form.residual > 1e-8);
    }

    #[test]
    fn gauge_is_deterministic() {
        let s = random_invertible(3, 10.0, Seed(12)).unwrap();
        let g1 = gauge_fix(&s);
        let g2 = gauge_fix(&s.scale(Complex64::new(-3.0, 1.5)));
        assert!(g1.max_abs_diff(&g2) < 1e-12);
        assert!((g1.determinant().norm() - 1.0).abs() < 1e-12);
        let first = g1.to_row_major()[0];
        assert!(first.im.abs() < 1e-15 && first.re > 0.0);
    }

    #[test]
    fn main_theorem_examples() {
        let report = verify_main_theorem(&Superoperator::transpose(2), 2, 30, Seed(1), 1e-8).unwrap();
        assert_eq!(report.branch, Branch::TransposeBranch);
        assert_eq!(report.trials, 30);
        assert!(report.max_deviation <= 1e-10);

        let u = random_unitary(3, Seed(2)).unwrap();
        let report =
            verify_main_theorem(&Superoperator::conjugation(&u).unwrap(), 3, 30, Seed(3), 1e-8).unwrap();
        assert_eq!(report.branch, Branch::IdentityBranch);

        let s = random_invertible(3, 100.0, Seed(4)).unwrap();
        let l = Superoperator::transpose_conjugation(&s).unwrap();
        let report = verify_main_theorem(&l, 2, 30, Seed(5), 1e-7).unwrap();
        assert_eq!(report.branch, Branch::TransposeBranch);
        assert!(report.identity_max_deviation > 1e-3);
    }

    #[test]
    fn main_theorem_rejects_non_ep_and_zero_trials() {
        let err = verify_main_theorem(&Superoperator::identity(2).scale(2.0), 2, 5, Seed(1), 1e-8).unwrap_err();
        assert!(matches!(err, Error::NotEigenvaluePreserving { .. }));
        assert!(verify_main_theorem(&Superoperator::transpose(2), 2, 0, Seed(1), 1e-8).is_err());
    }
}
