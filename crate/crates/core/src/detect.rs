//! Detectors of nonclassical correlation.
//!
//! `pt_detect` compares the spectrum of a state with that of its partial
//! transpose: any change certifies that no product eigenbasis exists, while
//! no change is inconclusive. `chen_test` decides one-way classicality from
//! commutators of operator blocks, and `pcc_test` runs it on both sides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_herm, matching_distance, partial_transpose, BipartiteDims, CMatrix, DensityMatrix, Side,
    Spectrum,
};

/// Default per-side dimension cap for the commutation test.
pub const CHEN_MAX_SIDE_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportSide {
    A,
    B,
    Both,
}

impl From<Side> for ReportSide {
    fn from(s: Side) -> Self {
        match s {
            Side::A => ReportSide::A,
            Side::B => ReportSide::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "PT")]
    Pt,
    Chen,
    Pcc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub detected: bool,
    pub spectrum_before: Spectrum,
    pub spectrum_after: Spectrum,
    pub deviation: f64,
    pub side: ReportSide,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub passes: bool,
    pub max_commutator_norm: f64,
    /// Threshold actually applied: the requested tolerance times `‖ρ‖_max²`.
    pub effective_tol: f64,
    pub pairs_tested: usize,
    pub classical_side: Side,
    /// Orthonormal set used on the probed subsystem.
    pub cons: String,
}

/// Partial-transpose spectral detector on `side`.
pub fn pt_detect(rho: &DensityMatrix, dims: BipartiteDims, side: Side, tol: f64) -> Result<DetectionReport> {
    let m = rho.as_cmatrix();
    let before = eig_herm(m)?.spectrum;
    let after = eig_herm(&partial_transpose(m, dims, side)?)?.spectrum;
    let deviation = matching_distance(&before, &after)?;
    Ok(DetectionReport {
        detected: deviation > tol,
        spectrum_before: before,
        spectrum_after: after,
        deviation,
        side: side.into(),
        method: Method::Pt,
    })
}

/// Operator blocks probed by the commutation test. For a classical side B,
/// these are `⟨i|ρ|i'⟩` over the computational basis of A (operators on B).
fn blocks(m: &CMatrix, dims: BipartiteDims, classical_side: Side) -> Vec<CMatrix> {
    let (da, db) = (dims.d_a, dims.d_b);
    let mut out = Vec::new();
    match classical_side {
        Side::B => {
            for i in 0..da {
                for ip in 0..da {
                    out.push(CMatrix::from_fn(db, |k, l| m[(i * db + k, ip * db + l)]));
                }
            }
        }
        Side::A => {
            for k in 0..db {
                for l in 0..db {
                    out.push(CMatrix::from_fn(da, |i, ip| m[(i * db + k, ip * db + l)]));
                }
            }
        }
    }
    out
}

/// Commutation test with the default dimension cap.
pub fn chen_test(
    rho: &DensityMatrix,
    dims: BipartiteDims,
    classical_side: Side,
    tol: f64,
) -> Result<CommutationReport> {
    chen_test_with_cap(rho, dims, classical_side, tol, CHEN_MAX_SIDE_DIM)
}

/// Passes iff all blocks `⟨u_i|ρ|u_i'⟩` (computational basis on the probed
/// side) mutually commute, i.e. iff `ρ` is one-way classically correlated
/// with `classical_side` classical.
pub fn chen_test_with_cap(
    rho: &DensityMatrix,
    dims: BipartiteDims,
    classical_side: Side,
    tol: f64,
    max_side_dim: usize,
) -> Result<CommutationReport> {
    let m = rho.as_cmatrix();
    dims.check(m)?;
    let probed = dims.of(classical_side.other());
    if probed > max_side_dim || dims.of(classical_side) > max_side_dim {
        return Err(Error::InvalidParameter(format!(
            "commutation test is capped at {max_side_dim} per side, got {dims}"
        )));
    }
    let scale = m.max_abs();
    let effective_tol = tol * scale * scale;
    let ops = blocks(m, dims, classical_side);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            worst = worst.max(a.commutator(b).max_abs());
            pairs += 1;
        }
    }
    Ok(CommutationReport {
        passes: worst <= effective_tol,
        max_commutator_norm: worst,
        effective_tol,
        pairs_tested: pairs,
        classical_side,
        cons: "computational".to_string(),
    })
}

/// Both one-way tests; `ρ` has a product eigenbasis iff both pass.
pub fn pcc_reports(
    rho: &DensityMatrix,
    dims: BipartiteDims,
    tol: f64,
) -> Result<(CommutationReport, CommutationReport)> {
    Ok((
        chen_test(rho, dims, Side::A, tol)?,
        chen_test(rho, dims, Side::B, tol)?,
    ))
}

pub fn pcc_test(rho: &DensityMatrix, dims: BipartiteDims, tol: f64) -> Result<bool> {
    let (a, b) = pcc_reports(rho, dims, tol)?;
    Ok(a.passes && b.passes)
}

/// Total-variation distance `½·Σ_i |λ_i↓ − λ'_i↓|` between the sorted
/// spectra of `ρ` and of its partial transpose on `side`. Zero for states
/// with a product eigenbasis; positive values certify nonclassical
/// correlation.
pub fn ncc_measure(rho: &DensityMatrix, dims: BipartiteDims, side: Side) -> Result<f64> {
    let m = rho.as_cmatrix();
    let before = eig_herm(m)?.spectrum.real_descending();
    let after = eig_herm(&partial_transpose(m, dims, side)?)?
        .spectrum
        .real_descending();
    Ok(0.5 * before.iter().zip(&after).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Smallest eigenvalue of the partial transpose; negative means NPT.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, dims: BipartiteDims, side: Side) -> Result<f64> {
    let pt = partial_transpose(rho.as_cmatrix(), dims, side)?;
    Ok(eig_herm(&pt)?.spectrum.real_descending().last().copied().unwrap_or(0.0))
}
