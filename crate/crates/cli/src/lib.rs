//! Report types and command implementations behind the `ence` binary.
//!
//! Every command returns a JSON report plus an exit status:
//! 0 for a positive verdict (detected, classified, branch found),
//! 1 for a negative one, and 2 for input or precondition errors.

use std::fmt;
use std::path::{Path, PathBuf};

use ence_core::detect::{
    chen_test_with_cap, min_pt_eigenvalue, ncc_measure, pcc_reports, pt_detect, CommutationReport,
    DetectionReport, Method,
};
use ence_core::preserver::{
    check_ep_on_density, classify_preserver, verify_main_theorem, EpReport, MainTheoremReport, MapKind,
};
use ence_core::states::{
    bell_state, ginibre, onewcc_state, pcc_state, random_density, random_invertible, random_onewcc_spec,
    random_pcc_spec, random_unitary_with, rho_p, PccSpec, RNG_ALGORITHM,
};
use ence_core::{
    BipartiteDims, CMatrix, DensityMatrix, MatrixFile, MatrixKind, Seed, Side, Superoperator, Tolerances,
};
use serde::{Deserialize, Serialize};

/// Input or precondition failure; maps to exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<ence_core::Error> for CliError {
    fn from(e: ence_core::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub seed: Seed,
    pub trials: usize,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        for (name, value) in self.tolerances.iter() {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        if self.trials == 0 {
            return Err(CliError("--trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> RunEcho {
        RunEcho {
            tolerances: self.tolerances,
            seed: self.seed.0,
            trials: self.trials,
            rng: RNG_ALGORITHM.to_string(),
        }
    }
}

/// Effective settings, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunEcho {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub trials: usize,
    pub rng: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Detected,
    NotDetected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectOutput {
    pub input: String,
    pub dims: BipartiteDims,
    pub method: Method,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pt: Option<DetectionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ncc_measure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_pt_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commutation: Vec<CommutationReport>,
    pub run: RunEcho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub input: String,
    pub d: usize,
    pub kind: MapKind,
    pub residual: f64,
    /// Recovered `S` as a matrix file, absent for `NotEP`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixFile>,
    pub ep: EpReport,
    /// Sampling can only fail to find a counterexample; it never proves EP.
    pub ep_verdict: String,
    pub run: RunEcho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub input: String,
    pub d_a: usize,
    pub d_b: usize,
    pub report: MainTheoremReport,
    pub run: RunEcho,
}

/// A finished command: the text to emit and the exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub status: u8,
}

fn to_json<T: Serialize>(value: &T) -> String {
    ence_core::matfile::to_json_pretty(value)
}

fn load(path: &Path) -> CliResult<MatrixFile> {
    Ok(MatrixFile::load(path)?)
}

/// Resolves dimensions from the flag and the file header; they must agree.
fn resolve_dims(flag: Option<BipartiteDims>, file: &MatrixFile) -> CliResult<BipartiteDims> {
    let from_file = file.bipartite_dims()?;
    let dims = match (flag, from_file) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError(format!("--dims {a} conflicts with dims {b} in the file")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError("bipartite dimensions unknown; pass --dims AxB".into())),
    };
    if dims.total() != file.dim {
        return Err(CliError(format!("dims {dims} do not match matrix dimension {}", file.dim)));
    }
    Ok(dims)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectMethod {
    Pt,
    Chen,
    Pcc,
}

pub fn cmd_detect(
    path: &Path,
    dims: Option<BipartiteDims>,
    method: DetectMethod,
    side: Side,
    max_side_dim: usize,
    config: &RunConfig,
) -> CliResult<Outcome> {
    config.validate()?;
    let file = load(path)?;
    let dims = resolve_dims(dims, &file)?;
    let rho = file.to_density(&config.tolerances)?;
    let tol = &config.tolerances;
    let mut out = DetectOutput {
        input: path.display().to_string(),
        dims,
        method: Method::Pt,
        verdict: Verdict::NotDetected,
        pt: None,
        ncc_measure: None,
        min_pt_eigenvalue: None,
        commutation: Vec::new(),
        run: config.echo(),
    };
    match method {
        DetectMethod::Pt => {
            let report = pt_detect(&rho, dims, side, tol.spectra)?;
            out.verdict = if report.detected { Verdict::Detected } else { Verdict::NotDetected };
            out.ncc_measure = Some(ncc_measure(&rho, dims, side)?);
            out.min_pt_eigenvalue = Some(min_pt_eigenvalue(&rho, dims, side)?);
            out.pt = Some(report);
        }
        DetectMethod::Chen => {
            out.method = Method::Chen;
            let report = chen_test_with_cap(&rho, dims, side, tol.commutator, max_side_dim)?;
            out.verdict = if report.passes { Verdict::NotDetected } else { Verdict::Detected };
            out.commutation.push(report);
        }
        DetectMethod::Pcc => {
            out.method = Method::Pcc;
            for s in [Side::A, Side::B] {
                if dims.of(s) > max_side_dim {
                    return Err(CliError(format!("commutation test is capped at {max_side_dim} per side")));
                }
            }
            let (a, b) = pcc_reports(&rho, dims, tol.commutator)?;
            out.verdict = if a.passes && b.passes { Verdict::NotDetected } else { Verdict::Detected };
            out.commutation = vec![a, b];
        }
    }
    let status = if out.verdict == Verdict::Detected { 0 } else { 1 };
    Ok(Outcome { text: to_json(&out), status })
}

pub fn cmd_classify(path: &Path, samples: usize, config: &RunConfig) -> CliResult<Outcome> {
    config.validate()?;
    if samples == 0 {
        return Err(CliError("--samples must be at least 1".into()));
    }
    let file = load(path)?;
    let l = file.to_superoperator()?;
    let tol = &config.tolerances;
    let form = classify_preserver(&l, tol.classify);
    let ep = check_ep_on_density(&l, samples, config.seed, tol.spectra)?;
    let ep_verdict = if ep.ep_on_samples {
        format!("no counterexample found in {samples} sampled states")
    } else {
        format!(
            "counterexample found: spectrum moved by {:.3e}",
            ep.worst_spectrum_deviation
        )
    };
    let out = ClassifyOutput {
        input: path.display().to_string(),
        d: l.d(),
        kind: form.kind,
        residual: form.residual,
        s: form.s.as_ref().map(|s| MatrixFile::from_matrix(MatrixKind::General, s, None)),
        ep,
        ep_verdict,
        run: config.echo(),
    };
    let status = if form.kind == MapKind::NotEp { 1 } else { 0 };
    Ok(Outcome { text: to_json(&out), status })
}

pub fn cmd_verify_theorem(path: &Path, d_a: usize, config: &RunConfig) -> CliResult<Outcome> {
    config.validate()?;
    let file = load(path)?;
    let l = file.to_superoperator()?;
    let report = verify_main_theorem(&l, d_a, config.trials, config.seed, config.tolerances.spectra)?;
    let status = if report.branch == ence_core::preserver::Branch::Violated { 1 } else { 0 };
    let out = VerifyOutput {
        input: path.display().to_string(),
        d_a,
        d_b: l.d(),
        report,
        run: config.echo(),
    };
    Ok(Outcome { text: to_json(&out), status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Pcc,
    Onewcc,
    Bell,
    RhoP,
    Random,
    Transpose,
    Conjugation,
    TransposeConjugation,
}

impl Family {
    pub fn is_map(self) -> bool {
        matches!(self, Family::Transpose | Family::Conjugation | Family::TransposeConjugation)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub dims: BipartiteDims,
    pub weights: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub rank: Option<usize>,
    /// Side dimension of generated maps.
    pub d: usize,
    pub max_cond: f64,
    /// Frobenius norm of a Ginibre perturbation added to generated maps.
    pub perturb: Option<f64>,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            dims: BipartiteDims { d_a: 2, d_b: 2 },
            weights: None,
            p: None,
            rank: None,
            d: 2,
            max_cond: 100.0,
            perturb: None,
        }
    }
}

fn state_file(rho: &DensityMatrix, dims: BipartiteDims) -> MatrixFile {
    MatrixFile::from_density(rho, Some(dims))
}

fn require_2x2(dims: BipartiteDims, family: &str) -> CliResult<()> {
    if (dims.d_a, dims.d_b) != (2, 2) {
        return Err(CliError(format!("{family} is defined on 2x2 only, got --dims {dims}")));
    }
    Ok(())
}

/// Builds a matrix file for `family`; deterministic given the seed.
pub fn generate(family: Family, params: &GenParams, seed: Seed) -> CliResult<MatrixFile> {
    let dims = params.dims;
    let file = match family {
        Family::Pcc => {
            let spec = match &params.weights {
                Some(w) => {
                    let mut rng = seed.rng();
                    PccSpec {
                        weights: w.clone(),
                        basis_a: random_unitary_with(dims.d_a, &mut rng)?,
                        basis_b: random_unitary_with(dims.d_b, &mut rng)?,
                    }
                }
                None => random_pcc_spec(dims, seed)?,
            };
            state_file(&pcc_state(&spec)?, dims)
        }
        Family::Onewcc => state_file(&onewcc_state(&random_onewcc_spec(dims, seed)?)?, dims),
        Family::Bell => {
            require_2x2(dims, "bell")?;
            state_file(&bell_state(), dims)
        }
        Family::RhoP => {
            require_2x2(dims, "rho-p")?;
            let p = params.p.ok_or_else(|| CliError("rho-p needs --p".into()))?;
            state_file(&rho_p(p, &bell_state())?, dims)
        }
        Family::Random => {
            let rank = params.rank.unwrap_or(dims.total());
            state_file(&random_density(dims.total(), rank, seed)?, dims)
        }
        Family::Transpose | Family::Conjugation | Family::TransposeConjugation => {
            let mut l = match family {
                Family::Transpose => Superoperator::transpose(params.d),
                Family::Conjugation => {
                    Superoperator::conjugation(&random_invertible(params.d, params.max_cond, seed)?)?
                }
                _ => Superoperator::transpose_conjugation(&random_invertible(
                    params.d,
                    params.max_cond,
                    seed,
                )?)?,
            };
            if let Some(size) = params.perturb {
                if !(size.is_finite() && size > 0.0) {
                    return Err(CliError(format!("--perturb must be positive, got {size}")));
                }
                l = perturb(&l, size, seed.derive(0))?;
            }
            MatrixFile::from_superoperator(&l)
        }
    };
    if params.perturb.is_some() && !family.is_map() {
        return Err(CliError("--perturb applies to map families only".into()));
    }
    Ok(file)
}

pub fn cmd_gen(family: Family, params: &GenParams, config: &RunConfig) -> CliResult<Outcome> {
    config.validate()?;
    let file = generate(family, params, config.seed)?;
    file.validate(&config.tolerances)?;
    Ok(Outcome { text: file.to_json(), status: 0 })
}

/// Ginibre-perturbed copy of `l` with Frobenius perturbation norm `size`.
fn perturb(l: &Superoperator, size: f64, seed: Seed) -> CliResult<Superoperator> {
    let n = l.d() * l.d();
    let e = CMatrix::new(ginibre(n, n, &mut seed.rng()))?;
    let e = e.scale_real(size / e.frobenius_norm());
    Ok(Superoperator::new(l.matrix() + &e)?)
}
