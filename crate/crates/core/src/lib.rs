//! Detection of bipartite nonclassical correlation through eigenvalue changes
//! under partially applied linear maps, and numerical analysis of linear
//! eigenvalue-preserving maps on `M_d(ℂ)`.
//!
//! Conventions used throughout:
//! - bipartite matrices index subsystem A as the major (slow) index;
//! - superoperators act on column-stacked matrices,
//!   `vec(AXB) = (Bᵀ⊗A)·vec(X)`.

pub mod detect;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod matfile;
pub mod preserver;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{BipartiteDims, CMatrix, DensityMatrix, EigSystem, Side, Spectrum};
pub use num_complex::Complex64;
pub use maps::Superoperator;
pub use matfile::{MatrixFile, MatrixKind};
pub use states::Seed;
pub use tol::Tolerances;
