//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// All tolerances live in one record so that a run can be reproduced from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative eigen-residual tolerance, scaled by the matrix norm.
    pub eig_tol: f64,
    /// Relative Hermiticity tolerance, scaled by the largest entry.
    pub hermitian_tol: f64,
    /// Largest admissible matrix dimension for assembled products.
    pub max_dim: usize,
    /// Threshold under which a probe point counts as a member of a finite
    /// (exact) Clifford spectrum.
    pub member_eps: f64,
    /// Residual tolerance for polynomial curve points.
    pub curve_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_tol: 1e-10,
            hermitian_tol: 1e-12,
            max_dim: 16384,
            member_eps: 1e-8,
            curve_tol: 1e-10,
        }
    }
}
