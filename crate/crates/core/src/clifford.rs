//! Irreducible representations of the Clifford relations
//! `Γ_j* = Γ_j`, `Γ_j² = I`, `Γ_jΓ_k = −Γ_kΓ_j` (j ≠ k).

use serde::Serialize;

use crate::eigen::eigenvalues_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, HermitianMatrix};

pub const MAX_GENERATORS: usize = 20;

/// `d` anticommuting Hermitian involutions of size `2^⌊d/2⌋`.
#[derive(Clone, Debug)]
pub struct GammaRep {
    gammas: Vec<HermitianMatrix>,
}

impl GammaRep {
    /// Wraps arbitrary matrices without checking the relations; use
    /// [`verify_clifford`] to inspect them.
    pub fn from_matrices(gammas: Vec<HermitianMatrix>) -> Result<Self> {
        let size = gammas
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty gamma list".into()))?
            .dim();
        if gammas.iter().any(|g| g.dim() != size) {
            return Err(Error::DimensionMismatch("gamma matrices differ in size".into()));
        }
        Ok(Self { gammas })
    }

    pub fn d(&self) -> usize {
        self.gammas.len()
    }

    pub fn size(&self) -> usize {
        self.gammas[0].dim()
    }

    pub fn gammas(&self) -> &[HermitianMatrix] {
        &self.gammas
    }

    pub fn gamma(&self, j: usize) -> &HermitianMatrix {
        &self.gammas[j]
    }

    /// `(UΓ₁U*, …, UΓ_dU*)`, a unitarily equivalent representation.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        let gammas = self
            .gammas
            .iter()
            .map(|g| g.conjugate_by(u))
            .collect::<Result<_>>()?;
        Ok(Self { gammas })
    }

    /// `Σ α_j Γ_j`.
    pub fn combination(&self, alpha: &[f64]) -> Result<HermitianMatrix> {
        if alpha.len() != self.d() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} generators",
                alpha.len(),
                self.d()
            )));
        }
        let refs: Vec<&HermitianMatrix> = self.gammas.iter().collect();
        HermitianMatrix::linear_combination(alpha, &refs)
    }
}

/// Standard representation with `d` generators.
///
/// `d = 2` gives `(σx, σy)` and `d = 3` gives `(σx, σy, σz)`. Larger odd
/// `d` comes from `Γ'_j = Γ_j ⊗ σz`, `Γ'_{d+1} = I ⊗ σx`,
/// `Γ'_{d+2} = I ⊗ σy`; even `d` takes the first `d` generators of the
/// `d + 1` representation, which already has size `2^{d/2}`.
pub fn gamma_rep(d: usize) -> Result<GammaRep> {
    if d == 0 || d > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "generator count must lie in 1..={MAX_GENERATORS}, got {d}"
        )));
    }
    let gammas = match d {
        1 => vec![HermitianMatrix::identity(1)],
        2 => vec![pauli::sigma_x(), pauli::sigma_y()],
        _ => {
            let odd = if d % 2 == 1 { d } else { d + 1 };
            let mut gammas = odd_rep(odd);
            gammas.truncate(d);
            gammas
        }
    };
    Ok(GammaRep { gammas })
}

fn odd_rep(d: usize) -> Vec<HermitianMatrix> {
    debug_assert!(d >= 3 && d % 2 == 1);
    let mut gammas = vec![pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()];
    while gammas.len() < d {
        let size = gammas[0].dim();
        let id = ComplexMatrix::identity(size);
        let lift = |a: &ComplexMatrix, b: &HermitianMatrix| {
            HermitianMatrix::symmetrized(
                ComplexMatrix::kron(a, b.as_matrix(), usize::MAX).expect("size below cap"),
            )
        };
        let mut next: Vec<HermitianMatrix> = gammas
            .iter()
            .map(|g| lift(g.as_matrix(), &pauli::sigma_z()))
            .collect();
        next.push(lift(&id, &pauli::sigma_x()));
        next.push(lift(&id, &pauli::sigma_y()));
        gammas = next;
    }
    gammas
}

/// Largest violation of each relation family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CliffordReport {
    pub hermitian: f64,
    pub involution: f64,
    pub anticommutation: f64,
    pub passed: bool,
}

impl CliffordReport {
    pub fn max_violation(&self) -> f64 {
        self.hermitian.max(self.involution).max(self.anticommutation)
    }
}

pub fn verify_clifford(rep: &GammaRep, tol: f64) -> CliffordReport {
    let n = rep.size();
    let id = ComplexMatrix::identity(n);
    let mut hermitian: f64 = 0.0;
    let mut involution: f64 = 0.0;
    let mut anticommutation: f64 = 0.0;
    for (j, gj) in rep.gammas.iter().enumerate() {
        let g = gj.as_matrix();
        hermitian = hermitian.max(g.hermitian_deviation());
        involution = involution.max((&(g * g) - &id).max_abs());
        for gk in &rep.gammas[j + 1..] {
            let h = gk.as_matrix();
            anticommutation = anticommutation.max((&(g * h) + &(h * g)).max_abs());
        }
    }
    CliffordReport {
        hermitian,
        involution,
        anticommutation,
        passed: hermitian <= tol && involution <= tol && anticommutation <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationSpectrumReport {
    pub norm: f64,
    pub eigenvalues: Vec<f64>,
    /// `max_k ||λ_k| − ‖α‖₂|`
    pub max_deviation: f64,
    pub passed: bool,
}

/// Checks that every eigenvalue of `Σ α_j Γ_j` equals `±‖α‖₂`.
pub fn linear_combination_spectrum_check(
    rep: &GammaRep,
    alpha: &[f64],
    eig_tol: f64,
) -> Result<CombinationSpectrumReport> {
    let m = rep.combination(alpha)?;
    let norm = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
    let eigenvalues = eigenvalues_hermitian(&m);
    let max_deviation = eigenvalues
        .iter()
        .map(|l| (l.abs() - norm).abs())
        .fold(0.0, f64::max);
    Ok(CombinationSpectrumReport {
        norm,
        passed: max_deviation <= eig_tol * norm.max(1.0),
        eigenvalues,
        max_deviation,
    })
}
