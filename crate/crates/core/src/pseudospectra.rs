//! Spectral localizers, quadratic forms, and the Clifford, quadratic and
//! windowed pseudospectra of a Hermitian tuple, together with the
//! structural identities they satisfy.

use serde::{Deserialize, Serialize};

use crate::band::BandHermitian;
use crate::clifford::{gamma_rep, GammaRep};
use crate::config::Tolerances;
use crate::eigen::{eig_hermitian, matrix_function_hermitian, operator_norm, smallest_singular_value, Tridiagonal};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64, ZERO};

/// Ordered tuple `(A₁, …, A_d)` of equally sized Hermitian matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTuple {
    ops: Vec<HermitianMatrix>,
}

impl HermitianTuple {
    pub fn new(ops: Vec<HermitianMatrix>) -> Result<Self> {
        let dim = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty tuple".into()))?
            .dim();
        if let Some(bad) = ops.iter().position(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator {bad} has size {} but operator 0 has size {dim}",
                ops[bad].dim()
            )));
        }
        Ok(Self { ops })
    }

    pub fn d(&self) -> usize {
        self.ops.len()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn ops(&self) -> &[HermitianMatrix] {
        &self.ops
    }

    pub fn op(&self, j: usize) -> &HermitianMatrix {
        &self.ops[j]
    }

    /// `(QA₁Q*, …, QA_dQ*)`.
    pub fn conjugated(&self, q: &ComplexMatrix) -> Result<Self> {
        Self::new(self.ops.iter().map(|a| a.conjugate_by(q)).collect::<Result<_>>()?)
    }

    /// `Â_j = Σ_s u_{js} A_s` for a real d×d matrix `u` (rows outer).
    pub fn rotated(&self, u: &[Vec<f64>]) -> Result<Self> {
        check_square(u, self.d())?;
        let refs: Vec<&HermitianMatrix> = self.ops.iter().collect();
        Self::new(
            u.iter()
                .map(|row| HermitianMatrix::linear_combination(row, &refs))
                .collect::<Result<_>>()?,
        )
    }

    /// The first `k` operators.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.d() {
            return Err(Error::InvalidArgument(format!("prefix length {k} out of range")));
        }
        Self::new(self.ops[..k].to_vec())
    }

    fn check_probe(&self, lambda: &[f64]) -> Result<()> {
        if lambda.len() != self.d() {
            return Err(Error::DimensionMismatch(format!(
                "probe has {} coordinates but the tuple has {} operators",
                lambda.len(),
                self.d()
            )));
        }
        if lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("probe point must be finite".into()));
        }
        Ok(())
    }
}

fn check_square(u: &[Vec<f64>], d: usize) -> Result<()> {
    if u.len() != d || u.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!("expected a {d}x{d} matrix")));
    }
    Ok(())
}

/// `(Uλ)_j = Σ_s u_{js} λ_s`.
pub fn apply_orthogonal(u: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    u.iter()
        .map(|row| row.iter().zip(lambda).map(|(a, b)| a * b).sum())
        .collect()
}

/// Which pseudospectra to evaluate at a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Which {
    pub clifford: bool,
    pub quadratic: bool,
    pub windowed: bool,
}

impl Which {
    pub const CLIFFORD: Which = Which {
        clifford: true,
        quadratic: false,
        windowed: false,
    };
    pub const CQ: Which = Which {
        clifford: true,
        quadratic: true,
        windowed: false,
    };

    /// Parses a comma list such as `c,q,w`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut w = Which {
            clifford: false,
            quadratic: false,
            windowed: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "c" => w.clifford = true,
                "q" => w.quadratic = true,
                "w" => w.windowed = true,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown pseudospectrum '{other}', expected c, q or w"
                    )))
                }
            }
        }
        if !(w.clifford || w.quadratic || w.windowed) {
            return Err(Error::InvalidArgument("no pseudospectrum selected".into()));
        }
        Ok(w)
    }
}

/// Bump functions admissible for the windowed pseudospectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// `exp(−t² / (2 w²))`
    Gaussian { width: f64 },
}

impl Default for Window {
    fn default() -> Self {
        Window::Gaussian { width: 1.0 }
    }
}

impl Window {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Window::Gaussian { width } => (-t * t / (2.0 * width * width)).exp(),
        }
    }
}

/// Values of the pseudospectra at one probe point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumSample {
    pub lambda: Vec<f64>,
    pub mu_c: Option<f64>,
    pub mu_q: Option<f64>,
    pub mu_w: Option<f64>,
}

/// `L_λ(A) = Σ (A_j − λ_j I) ⊗ Γ_j`, assembled densely.
pub fn spectral_localizer(a: &HermitianTuple, lambda: &[f64], rep: &GammaRep) -> Result<HermitianMatrix> {
    a.check_probe(lambda)?;
    if rep.d() != a.d() {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generators, tuple has {} operators",
            rep.d(),
            a.d()
        )));
    }
    let max_dim = Tolerances::default().max_dim;
    let size = a.dim() * rep.size();
    if size > max_dim {
        return Err(Error::TooLarge { dim: size, max: max_dim });
    }
    let mut acc = ComplexMatrix::zeros(size, size);
    for ((op, &l), g) in a.ops().iter().zip(lambda).zip(rep.gammas()) {
        let term = ComplexMatrix::kron(op.shifted(l).as_matrix(), g.as_matrix(), max_dim)?;
        acc = &acc + &term;
    }
    Ok(HermitianMatrix::symmetrized(acc))
}

/// `Q_λ(A) = Σ (A_j − λ_j)²`.
pub fn quadratic_form(a: &HermitianTuple, lambda: &[f64]) -> Result<HermitianMatrix> {
    a.check_probe(lambda)?;
    let n = a.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for (op, &l) in a.ops().iter().zip(lambda) {
        acc = &acc + op.shifted(l).square().as_matrix();
    }
    Ok(HermitianMatrix::symmetrized(acc))
}

/// `μ^C_λ = s_min(L_λ(A))` with the standard gamma representation.
pub fn clifford_pseudospectrum(a: &HermitianTuple, lambda: &[f64]) -> Result<f64> {
    a.check_probe(lambda)?;
    Ok(Evaluator::new(a)?.mu_c(lambda))
}

/// `μ^Q_λ = √(s_min(Q_λ(A)))`.
pub fn quadratic_pseudospectrum(a: &HermitianTuple, lambda: &[f64]) -> Result<f64> {
    a.check_probe(lambda)?;
    Ok(Evaluator::new(a)?.mu_q(lambda))
}

/// `μ^Q` via the stacked column `M_λ = [A₁ − λ₁; …; A_d − λ_d]`, whose
/// smallest singular value must agree with the quadratic-form route.
pub fn quadratic_pseudospectrum_stacked(a: &HermitianTuple, lambda: &[f64]) -> Result<f64> {
    a.check_probe(lambda)?;
    let blocks: Vec<ComplexMatrix> = a
        .ops()
        .iter()
        .zip(lambda)
        .map(|(op, &l)| op.shifted(l).into_matrix())
        .collect();
    Ok(smallest_singular_value(&ComplexMatrix::vstack(&blocks)?))
}

/// `1 − ‖g(A_{σ(1)} − λ_{σ(1)}) ⋯ g(A_{σ(d)} − λ_{σ(d)})‖` for the product
/// order `σ = order`.
pub fn windowed_pseudospectrum(
    a: &HermitianTuple,
    lambda: &[f64],
    g: &dyn Fn(f64) -> f64,
    order: &[usize],
) -> Result<f64> {
    a.check_probe(lambda)?;
    let d = a.d();
    let mut seen = vec![false; d];
    if order.len() != d || order.iter().any(|&j| j >= d || std::mem::replace(&mut seen[j], true)) {
        return Err(Error::InvalidArgument(format!(
            "order {order:?} is not a permutation of 0..{d}"
        )));
    }
    let g0 = g(0.0);
    if (g0 - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("window must satisfy g(0) = 1, got {g0}")));
    }
    let n = a.dim();
    let mut w = ComplexMatrix::identity(n);
    for &j in order {
        let shifted = a.op(j).shifted(lambda[j]);
        let eig = eig_hermitian(&shifted);
        for &t in &eig.eigenvalues {
            let v = g(t);
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "window value g({t}) = {v} lies outside [0, 1]"
                )));
            }
        }
        let gj = matrix_function_hermitian(&shifted, g);
        w = &w * gj.as_matrix();
    }
    Ok((1.0 - operator_norm(&w)).clamp(0.0, 1.0))
}

/// `Σ_{j<k} ‖[A_j, A_k]‖`.
pub fn commutator_bound(a: &HermitianTuple) -> f64 {
    let mut total = 0.0;
    for j in 0..a.d() {
        for k in j + 1..a.d() {
            total += commutator_norm(a.op(j), a.op(k));
        }
    }
    total
}

/// `‖[A, B]‖`, computed as the spectral norm of the Hermitian `i[A, B]`.
pub fn commutator_norm(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    let c = ComplexMatrix::commutator(x.as_matrix(), y.as_matrix()).expect("equal sizes");
    if c.max_abs() == 0.0 {
        return 0.0;
    }
    HermitianMatrix::symmetrized(c.scale(C64::new(0.0, 1.0))).spectral_norm()
}

/// Reusable evaluator for one tuple and one gamma representation.
///
/// Operator entries are cached as sparse triplets, and each probe assembles
/// the localizer (or quadratic form) directly into band storage, so banded
/// tuples cost O(n·kd²) per probe rather than O(n³).
#[derive(Clone, Debug)]
pub struct Evaluator<'a> {
    tuple: &'a HermitianTuple,
    rep: GammaRep,
    /// upper-triangle (including diagonal) nonzeros per operator
    entries: Vec<Vec<(usize, usize, C64)>>,
    square_sum: Vec<(usize, usize, C64)>,
    op_kd: usize,
    localizer_storage_kd: usize,
    localizer_kd: usize,
    quadratic_kd: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(tuple: &'a HermitianTuple) -> Result<Self> {
        Self::with_rep(tuple, gamma_rep(tuple.d())?)
    }

    pub fn with_rep(tuple: &'a HermitianTuple, rep: GammaRep) -> Result<Self> {
        if rep.d() != tuple.d() {
            return Err(Error::DimensionMismatch(format!(
                "representation has {} generators, tuple has {} operators",
                rep.d(),
                tuple.d()
            )));
        }
        let max_dim = Tolerances::default().max_dim;
        let size = tuple.dim() * rep.size();
        if size > max_dim {
            return Err(Error::TooLarge { dim: size, max: max_dim });
        }
        let entries: Vec<Vec<(usize, usize, C64)>> = tuple.ops().iter().map(upper_entries).collect();
        let op_kd = entries
            .iter()
            .flatten()
            .map(|&(i, j, _)| j - i)
            .max()
            .unwrap_or(0);
        let n = tuple.dim();
        let mut sq = ComplexMatrix::zeros(n, n);
        for op in tuple.ops() {
            sq = &sq + op.square().as_matrix();
        }
        let square_sum = upper_entries(&HermitianMatrix::symmetrized(sq));
        let sq_kd = square_sum.iter().map(|&(i, j, _)| j - i).max().unwrap_or(0);
        let g = rep.size();
        let storage_kd = ((op_kd + 1) * g - 1).min(size - 1);
        let mut ev = Self {
            tuple,
            rep,
            entries,
            square_sum,
            op_kd,
            localizer_storage_kd: storage_kd,
            localizer_kd: storage_kd,
            quadratic_kd: sq_kd.max(op_kd),
        };
        // an irrational-looking shift so that no entry cancels by accident
        let generic: Vec<f64> = (0..tuple.d()).map(|j| 0.318_4 * (j as f64 + 1.0)).collect();
        let zero = vec![0.0; tuple.d()];
        ev.localizer_kd = ev
            .assemble_localizer(&zero)
            .effective_bandwidth()
            .max(ev.assemble_localizer(&generic).effective_bandwidth());
        Ok(ev)
    }

    pub fn tuple(&self) -> &HermitianTuple {
        self.tuple
    }

    pub fn rep(&self) -> &GammaRep {
        &self.rep
    }

    /// Bandwidth of the assembled localizer after cancellations.
    pub fn localizer_bandwidth(&self) -> usize {
        self.localizer_kd
    }

    pub fn operator_bandwidth(&self) -> usize {
        self.op_kd
    }

    fn assemble_localizer(&self, lambda: &[f64]) -> BandHermitian {
        let g = self.rep.size();
        let size = self.tuple.dim() * g;
        let mut band = BandHermitian::zeros(size, self.localizer_storage_kd);
        for ((entries, gamma), &l) in self.entries.iter().zip(self.rep.gammas()).zip(lambda) {
            for &(r, c, v) in entries {
                let v = if r == c { v - l } else { v };
                if v == ZERO {
                    continue;
                }
                for s in 0..g {
                    for t in 0..g {
                        let gv = gamma[(s, t)];
                        if gv == ZERO {
                            continue;
                        }
                        let val = v * gv;
                        if r == c {
                            band.add_entry(r * g + s, c * g + t, val);
                        } else {
                            band.add_entry(r * g + s, c * g + t, val);
                            band.add_entry(c * g + t, r * g + s, val.conj());
                        }
                    }
                }
            }
            // diagonal entries that are structurally zero still carry −λ_j
            if l != 0.0 {
                for r in 0..self.tuple.dim() {
                    if entries.iter().any(|&(i, j, _)| i == r && j == r) {
                        continue;
                    }
                    for s in 0..g {
                        for t in 0..g {
                            let gv = gamma[(s, t)];
                            if gv != ZERO {
                                band.add_entry(r * g + s, r * g + t, gv * (-l));
                            }
                        }
                    }
                }
            }
        }
        band.compact(self.localizer_kd.max(1).min(self.localizer_storage_kd))
    }

    /// Localizer in band storage at `λ`.
    pub fn localizer_band(&self, lambda: &[f64]) -> BandHermitian {
        self.assemble_localizer(lambda)
    }

    /// Dense localizer at `λ`.
    pub fn localizer(&self, lambda: &[f64]) -> HermitianMatrix {
        self.assemble_localizer(lambda).to_hermitian()
    }

    fn localizer_tridiagonal(&self, lambda: &[f64]) -> Tridiagonal {
        self.assemble_localizer(lambda).into_tridiagonal()
    }

    /// `μ^C_λ`.
    pub fn mu_c(&self, lambda: &[f64]) -> f64 {
        self.localizer_tridiagonal(lambda).min_abs_eigenvalue()
    }

    /// `(μ^C_λ, number of negative eigenvalues of L_λ)`.
    pub fn mu_c_with_inertia(&self, lambda: &[f64]) -> (f64, usize) {
        self.localizer_tridiagonal(lambda).min_abs_with_inertia()
    }

    /// Band form of `Q_λ = Σ A_j² − 2 Σ λ_j A_j + ‖λ‖² I`.
    pub fn quadratic_band(&self, lambda: &[f64]) -> BandHermitian {
        let n = self.tuple.dim();
        let mut band = BandHermitian::zeros(n, self.quadratic_kd);
        for &(r, c, v) in &self.square_sum {
            band.add_hermitian(r, c, v);
        }
        for (entries, &l) in self.entries.iter().zip(lambda) {
            if l == 0.0 {
                continue;
            }
            for &(r, c, v) in entries {
                band.add_hermitian(r, c, v * (-2.0 * l));
            }
        }
        let norm2: f64 = lambda.iter().map(|x| x * x).sum();
        for r in 0..n {
            band.add_hermitian(r, r, C64::new(norm2, 0.0));
        }
        band
    }

    /// `μ^Q_λ`.
    pub fn mu_q(&self, lambda: &[f64]) -> f64 {
        let tri = self.quadratic_band(lambda).into_tridiagonal();
        // Q_λ is positive semidefinite: a nonpositive Sturm pivot is a kernel.
        if tri.negative_count() > 0 {
            return 0.0;
        }
        tri.min_eigenvalue().max(0.0).sqrt()
    }

    /// Windowed pseudospectrum with index order `0, 1, …, d−1`.
    pub fn mu_w(&self, lambda: &[f64], window: Window) -> Result<f64> {
        let order: Vec<usize> = (0..self.tuple.d()).collect();
        windowed_pseudospectrum(self.tuple, lambda, &|t| window.eval(t), &order)
    }

    pub fn sample(&self, lambda: &[f64], which: Which, window: Window) -> Result<PseudospectrumSample> {
        self.tuple.check_probe(lambda)?;
        Ok(PseudospectrumSample {
            lambda: lambda.to_vec(),
            mu_c: which.clifford.then(|| self.mu_c(lambda)),
            mu_q: which.quadratic.then(|| self.mu_q(lambda)),
            mu_w: if which.windowed {
                Some(self.mu_w(lambda, window)?)
            } else {
                None
            },
        })
    }
}

fn upper_entries(m: &HermitianMatrix) -> Vec<(usize, usize, C64)> {
    let n = m.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = m[(i, j)];
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Outcome of the commuting-split identity `L² = L²_left + L²_right`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub split: usize,
    /// `max ‖[A_j, A_k]‖` over `j < split <= k`
    pub cross_commutator: f64,
    pub precondition_met: bool,
    /// `‖L_λ² − (L_left² + L_right²)‖`, when the precondition holds
    pub residual: Option<f64>,
    pub passed: bool,
}

/// Splits the tuple after the first `split` operators and checks that the
/// square of the localizer is the sum of the squares of the two partial
/// localizers, both built with the full-size gamma matrices.
pub fn localizer_partition_check(
    a: &HermitianTuple,
    split: usize,
    lambda: &[f64],
    tol: f64,
) -> Result<PartitionReport> {
    a.check_probe(lambda)?;
    if split == 0 || split >= a.d() {
        return Err(Error::InvalidArgument(format!(
            "split index {split} must lie in 1..{}",
            a.d()
        )));
    }
    let mut cross: f64 = 0.0;
    for j in 0..split {
        for k in split..a.d() {
            cross = cross.max(commutator_norm(a.op(j), a.op(k)));
        }
    }
    if cross > tol {
        return Ok(PartitionReport {
            split,
            cross_commutator: cross,
            precondition_met: false,
            residual: None,
            passed: false,
        });
    }
    let rep = gamma_rep(a.d())?;
    let max_dim = Tolerances::default().max_dim;
    let partial = |range: std::ops::Range<usize>| -> Result<ComplexMatrix> {
        let size = a.dim() * rep.size();
        let mut acc = ComplexMatrix::zeros(size, size);
        for j in range {
            let t = ComplexMatrix::kron(a.op(j).shifted(lambda[j]).as_matrix(), rep.gamma(j).as_matrix(), max_dim)?;
            acc = &acc + &t;
        }
        Ok(acc)
    };
    let left = partial(0..split)?;
    let right = partial(split..a.d())?;
    let full = spectral_localizer(a, lambda, &rep)?;
    let full_sq = full.square();
    let sum_sq = &(&left * &left) + &(&right * &right);
    let diff = HermitianMatrix::symmetrized(full_sq.as_matrix() - &sum_sq);
    let residual = diff.spectral_norm();
    let scale = full_sq.spectral_norm().max(1.0);
    Ok(PartitionReport {
        split,
        cross_commutator: cross,
        precondition_met: true,
        residual: Some(residual),
        passed: residual <= tol * scale,
    })
}

/// `μ^C(A)² = μ^C(A₁…A_{d−1})² + (α − λ_d)²` when `A_d = αI`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarSlotReport {
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    pub passed: bool,
}

pub fn scalar_slot_check(a: &HermitianTuple, lambda: &[f64], tol: f64) -> Result<ScalarSlotReport> {
    a.check_probe(lambda)?;
    let d = a.d();
    if d < 2 {
        return Err(Error::InvalidArgument("scalar-slot identity needs d >= 2".into()));
    }
    let last = a.op(d - 1);
    let alpha = last[(0, 0)].re;
    let defect = (last.as_matrix() - &ComplexMatrix::identity(a.dim()).scale_real(alpha)).max_abs();
    if defect > tol {
        return Err(Error::Precondition(format!(
            "last operator is not scalar: ‖A_d − αI‖_max = {defect:e}"
        )));
    }
    let full = clifford_pseudospectrum(a, lambda)?;
    let head = clifford_pseudospectrum(&a.prefix(d - 1)?, &lambda[..d - 1])?;
    let lhs = full * full;
    let rhs = head * head + (alpha - lambda[d - 1]).powi(2);
    let deviation = (lhs - rhs).abs();
    Ok(ScalarSlotReport {
        alpha,
        lhs,
        rhs,
        deviation,
        passed: deviation <= tol * rhs.max(1.0),
    })
}

/// Result of testing `μ^X(Uλ) = μ^X(λ)` under a tuple symmetry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// `‖UᵀU − I‖_max`
    pub orthogonality_defect: f64,
    /// `max_j ‖QÂ_jQ* − A_j‖_max`
    pub conjugation_defect: f64,
    pub hypothesis_met: bool,
    pub mu_c: Option<(f64, f64)>,
    pub mu_q: Option<(f64, f64)>,
    pub passed: bool,
}

impl SymmetryReport {
    pub fn max_delta(&self) -> f64 {
        [self.mu_c, self.mu_q]
            .iter()
            .flatten()
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks the hypotheses `U ∈ O(d)` and `QÂ_jQ* = A_j`, then compares
/// `μ^C` and `μ^Q` at `λ` and `Uλ`. A failed hypothesis is reported, not
/// raised.
pub fn symmetry_check(
    a: &HermitianTuple,
    u: &[Vec<f64>],
    q: &ComplexMatrix,
    lambda: &[f64],
    tol: f64,
) -> Result<SymmetryReport> {
    a.check_probe(lambda)?;
    check_square(u, a.d())?;
    let d = a.d();
    let mut orthogonality_defect: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let dot: f64 = (0..d).map(|k| u[k][i] * u[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orthogonality_defect = orthogonality_defect.max((dot - target).abs());
        }
    }
    let hat = a.rotated(u)?;
    let moved = hat.conjugated(q)?;
    let conjugation_defect = moved
        .ops()
        .iter()
        .zip(a.ops())
        .map(|(x, y)| (x.as_matrix() - y.as_matrix()).max_abs())
        .fold(0.0, f64::max);
    let hypothesis_met = orthogonality_defect <= tol && conjugation_defect <= tol;
    if !hypothesis_met {
        return Ok(SymmetryReport {
            orthogonality_defect,
            conjugation_defect,
            hypothesis_met,
            mu_c: None,
            mu_q: None,
            passed: false,
        });
    }
    let ev = Evaluator::new(a)?;
    let image = apply_orthogonal(u, lambda);
    let mu_c = (ev.mu_c(lambda), ev.mu_c(&image));
    let mu_q = (ev.mu_q(lambda), ev.mu_q(&image));
    let passed = (mu_c.0 - mu_c.1).abs() <= tol && (mu_q.0 - mu_q.1).abs() <= tol;
    Ok(SymmetryReport {
        orthogonality_defect,
        conjugation_defect,
        hypothesis_met,
        mu_c: Some(mu_c),
        mu_q: Some(mu_q),
        passed,
    })
}
