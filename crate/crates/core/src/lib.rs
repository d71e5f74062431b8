//! Joint spectra and multivariable pseudospectra of tuples of Hermitian
//! matrices, computed through the spectral localizer
//! `L_λ(A) = Σ (A_j − λ_j) ⊗ Γ_j`.
//!
//! Module map:
//! - [`matrix`], [`eigen`], [`band`]: dense complex arithmetic, Hermitian
//!   eigensolvers, smallest singular values, Kronecker products.
//! - [`clifford`]: gamma matrices satisfying the Clifford relations.
//! - [`pseudospectra`]: localizers, quadratic forms and the Clifford,
//!   quadratic and windowed pseudospectra with their structural checks.
//! - [`zoo`]: builders for the worked examples and closed-form oracles.
//! - [`scan`]: grid scans, zero sets, radial profiles and ray bisection.
//! - [`hemisphere`]: transfer-matrix analysis of the truncated Toeplitz
//!   triple.
//! - [`output`]: CSV/JSON/SVG emitters and the embedded JSON schema.

pub mod band;
pub mod clifford;
pub mod config;
pub mod eigen;
pub mod error;
pub mod hemisphere;
pub mod matrix;
pub mod output;
pub mod par;
pub mod pseudospectra;
pub mod scan;
pub mod zoo;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, HermitianMatrix, C64};
