use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{eigvals_herm, CMatrix};
use crate::error::{Error, Result};
use crate::tol::{scaled, Tolerances};

/// Tensor factorization `d_a·d_b` of a bipartite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidParameter(format!(
                "subsystem dimensions must be positive, got {d_a}x{d_b}"
            )));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn of(&self, side: Side) -> usize {
        match side {
            Side::A => self.d_a,
            Side::B => self.d_b,
        }
    }

    pub(crate) fn check(&self, m: &CMatrix) -> Result<()> {
        if m.dim() != self.total() {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                actual: m.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

impl FromStr for BipartiteDims {
    type Err = Error;

    /// Parses `AxB`, e.g. `2x3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected dimensions as AxB, got {s:?}"));
        let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let d_a = a.trim().parse().map_err(|_| bad())?;
        let d_b = b.trim().parse().map_err(|_| bad())?;
        Self::new(d_a, d_b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(Side::A),
            "b" | "B" => Ok(Side::B),
            other => Err(Error::InvalidParameter(format!("unknown side {other:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let magnitude = m.max_abs();
        let defect = m.hermiticity_defect();
        if defect > scaled(tol.herm, magnitude) {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max |ρ − ρ†| = {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - super::ONE).norm() > scaled(tol.trace, magnitude) {
            return Err(Error::InvalidDensity(format!(
                "trace is {:.12} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let evals = eigvals_herm(&m, tol.herm)?;
        let min = evals.last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::InvalidDensity(format!(
                "not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self(m))
    }

    /// Skips validation; for matrices that are density matrices by construction.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).trace().re
    }
}

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}
