//! State families and seeded random ensembles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvals_herm, tensor, BipartiteDims, CMatrix, DensityMatrix, ONE, ZERO};
use crate::tol::{scaled, Tolerances};

/// Name of the generator behind [`Seed`], echoed in reports.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64; derived seeds from stream k+1)";

const BASIS_TOL: f64 = 1e-9;

/// Seed for all random generators. Equal seeds give bit-identical output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// Independent child seed number `k`, drawn from ChaCha stream `k + 1`.
    /// Used to give each trial its own seed regardless of scheduling.
    pub fn derive(self, k: u64) -> Seed {
        let mut rng = self.rng();
        rng.set_stream(k.wrapping_add(1));
        Seed(rng.next_u64())
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows×cols` matrix of i.i.d. standard complex Gaussians, filled row by row.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    let data: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    DMatrix::from_row_slice(rows, cols, &data)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

pub fn random_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phases of R's diagonal so that Q is Haar distributed.
    let u = DMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj == ZERO { ONE } else { rjj / rjj.norm() };
        q[(i, j)] * phase
    });
    CMatrix::new(u)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(d: usize, seed: Seed) -> Result<CMatrix> {
    random_unitary_with(d, &mut seed.rng())
}

pub fn random_density_with<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank must satisfy 1 <= rank <= d, got rank {rank} for d {d}"
        )));
    }
    let g = ginibre(d, rank, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let rho = CMatrix::new(gg / Complex64::new(tr, 0.0))?;
    DensityMatrix::new(hermitian_part(&rho))
}

/// `GG†/tr(GG†)` for a `d×rank` Ginibre matrix `G`.
pub fn random_density(d: usize, rank: usize, seed: Seed) -> Result<DensityMatrix> {
    random_density_with(d, rank, &mut seed.rng())
}

/// Random invertible matrix `U·diag(s)·V` with Haar `U`, `V` and singular
/// values log-uniform in `[1, max_cond]`, so its condition number is at most
/// `max_cond`.
pub fn random_invertible(d: usize, max_cond: f64, seed: Seed) -> Result<CMatrix> {
    if !(max_cond >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "condition cap must be >= 1, got {max_cond}"
        )));
    }
    let mut rng = seed.rng();
    let u = random_unitary_with(d, &mut rng)?;
    let v = random_unitary_with(d, &mut rng)?;
    let s: Vec<f64> = (0..d).map(|_| max_cond.powf(rng.random::<f64>())).collect();
    Ok(&(&u * &CMatrix::from_real_diagonal(&s)) * &v)
}

/// Weights `e_ij` (index `i·d_b + j`) on the product basis `|u_i⟩⊗|v_j⟩`.
#[derive(Clone, Debug)]
pub struct PccSpec {
    pub weights: Vec<f64>,
    pub basis_a: CMatrix,
    pub basis_b: CMatrix,
}

impl PccSpec {
    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            d_a: self.basis_a.dim(),
            d_b: self.basis_b.dim(),
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let dims = self.dims();
        if self.weights.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                actual: self.weights.len(),
            });
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative or NaN weight {w}")));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}, expected 1")));
        }
        for (name, basis) in [("basis_a", &self.basis_a), ("basis_b", &self.basis_b)] {
            if !basis.is_unitary(BASIS_TOL) {
                return Err(Error::InvalidParameter(format!("{name} is not unitary")));
            }
        }
        Ok(())
    }
}

/// `Σ_ij e_ij |u_i⟩⟨u_i| ⊗ |v_j⟩⟨v_j|`: a state with a product eigenbasis.
pub fn pcc_state(spec: &PccSpec) -> Result<DensityMatrix> {
    spec.validate(&Tolerances::default())?;
    let u = tensor(&spec.basis_a, &spec.basis_b);
    let rho = &(&u * &CMatrix::from_real_diagonal(&spec.weights)) * &u.adjoint();
    DensityMatrix::new(hermitian_part(&rho))
}

fn random_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Uniform (flat Dirichlet) weights on Haar-random local bases.
pub fn random_pcc_spec(dims: BipartiteDims, seed: Seed) -> Result<PccSpec> {
    let mut rng = seed.rng();
    Ok(PccSpec {
        weights: random_weights(dims.total(), &mut rng),
        basis_a: random_unitary_with(dims.d_a, &mut rng)?,
        basis_b: random_unitary_with(dims.d_b, &mut rng)?,
    })
}

/// One-way classically correlated state `Σ_j σ_j ⊗ |v_j⟩⟨v_j|`, classical on B.
/// `sigmas[j]` pairs with column `j` of `basis_b`.
#[derive(Clone, Debug)]
pub struct OnewccSpec {
    pub sigmas: Vec<CMatrix>,
    pub basis_b: CMatrix,
}

impl OnewccSpec {
    pub fn dims(&self) -> Result<BipartiteDims> {
        let d_a = self
            .sigmas
            .first()
            .map(CMatrix::dim)
            .ok_or_else(|| Error::InvalidParameter("at least one sigma is required".into()))?;
        BipartiteDims::new(d_a, self.basis_b.dim())
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let dims = self.dims()?;
        if self.sigmas.len() != dims.d_b {
            return Err(Error::DimensionMismatch {
                expected: dims.d_b,
                actual: self.sigmas.len(),
            });
        }
        let mut total = 0.0;
        for (j, s) in self.sigmas.iter().enumerate() {
            if s.dim() != dims.d_a {
                return Err(Error::DimensionMismatch {
                    expected: dims.d_a,
                    actual: s.dim(),
                });
            }
            if !s.is_hermitian(tol.herm) {
                return Err(Error::InvalidParameter(format!("sigma {j} is not Hermitian")));
            }
            let min = eigvals_herm(s, tol.herm)?.last().copied().unwrap_or(0.0);
            if min < -tol.psd {
                return Err(Error::InvalidParameter(format!(
                    "sigma {j} is not positive semidefinite (min eigenvalue {min:.3e})"
                )));
            }
            total += s.trace().re;
        }
        if (total - 1.0).abs() > scaled(tol.trace, 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma traces sum to {total}, expected 1"
            )));
        }
        if !self.basis_b.is_unitary(BASIS_TOL) {
            return Err(Error::InvalidParameter("basis_b is not unitary".into()));
        }
        Ok(())
    }

    /// Largest `‖[σ_i, σ_j]‖_max` over all pairs.
    pub fn max_sigma_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.sigmas.iter().enumerate() {
            for b in &self.sigmas[i + 1..] {
                worst = worst.max(a.commutator(b).max_abs());
            }
        }
        worst
    }
}

pub fn onewcc_state(spec: &OnewccSpec) -> Result<DensityMatrix> {
    spec.validate(&Tolerances::default())?;
    let dims = spec.dims()?;
    let mut rho = CMatrix::zeros(dims.total());
    for (j, sigma) in spec.sigmas.iter().enumerate() {
        let proj = CMatrix::from_fn(dims.d_b, |k, l| {
            spec.basis_b[(k, j)] * spec.basis_b[(l, j)].conj()
        });
        rho = &rho + &tensor(sigma, &proj);
    }
    DensityMatrix::new(hermitian_part(&rho))
}

/// Random 1wcc spec: each `σ_j` is a random full-rank state scaled by a
/// flat-Dirichlet weight, so distinct `σ_j` almost surely do not commute.
pub fn random_onewcc_spec(dims: BipartiteDims, seed: Seed) -> Result<OnewccSpec> {
    let mut rng = seed.rng();
    let weights = random_weights(dims.d_b, &mut rng);
    let sigmas = weights
        .iter()
        .map(|&w| Ok(random_density_with(dims.d_a, dims.d_a, &mut rng)?.into_cmatrix().scale_real(w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OnewccSpec {
        sigmas,
        basis_b: random_unitary_with(dims.d_b, &mut rng)?,
    })
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> DensityMatrix {
    let mut m = CMatrix::zeros(4);
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = Complex64::new(0.5, 0.0);
    }
    DensityMatrix::from_trusted(m)
}

/// `(1 − p)·I/d + p·ρ_NPT` for `0 < p ≤ 1`.
pub fn rho_p(p: f64, rho_npt: &DensityMatrix) -> Result<DensityMatrix> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
    }
    let d = rho_npt.dim();
    let mixed = CMatrix::identity(d).scale_real((1.0 - p) / d as f64);
    DensityMatrix::new(&mixed + &rho_npt.as_cmatrix().scale_real(p))
}
