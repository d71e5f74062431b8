//! Concrete example tuples and closed-form oracle formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, HermitianMatrix, C64};
use crate::pseudospectra::HermitianTuple;

/// Default number of fibers used when the universal pair is realized as a
/// matrix tuple.
pub const DEFAULT_UNIVERSAL_FIBERS: usize = 65;

/// Declarative description of an example tuple, serialized as
/// `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ZooSpec {
    CommutingPoints { points: Vec<Vec<f64>> },
    Pauli,
    TwoProjection { z: f64 },
    /// Direct sum of the two-projection pairs over `fibers` evenly spaced
    /// values of `z` in `[−1, 1]`.
    UniversalPair {
        #[serde(default = "default_fibers")]
        fibers: usize,
    },
    Hemisphere { b: f64, n: usize },
    PositionMomentum { n: usize, half_width: f64 },
}

fn default_fibers() -> usize {
    DEFAULT_UNIVERSAL_FIBERS
}

impl ZooSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ZooSpec::CommutingPoints { .. } => "commuting_points",
            ZooSpec::Pauli => "pauli",
            ZooSpec::TwoProjection { .. } => "two_projection",
            ZooSpec::UniversalPair { .. } => "universal_pair",
            ZooSpec::Hemisphere { .. } => "hemisphere",
            ZooSpec::PositionMomentum { .. } => "position_momentum",
        }
    }

    /// Number of operators the spec builds.
    pub fn d(&self) -> usize {
        match self {
            ZooSpec::CommutingPoints { points } => points.first().map_or(0, Vec::len),
            ZooSpec::Pauli | ZooSpec::Hemisphere { .. } => 3,
            ZooSpec::TwoProjection { .. } | ZooSpec::UniversalPair { .. } | ZooSpec::PositionMomentum { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            ZooSpec::CommutingPoints { points } => {
                let d = match points.first() {
                    None => return bad("commuting_points needs at least one point".into()),
                    Some(p) => p.len(),
                };
                if d == 0 {
                    return bad("points must have at least one coordinate".into());
                }
                if points.iter().any(|p| p.len() != d) {
                    return bad("all points must have the same dimension".into());
                }
                if points.iter().flatten().any(|x| !x.is_finite()) {
                    return bad("point coordinates must be finite".into());
                }
            }
            ZooSpec::Pauli => {}
            ZooSpec::TwoProjection { z } => {
                if !(-1.0..=1.0).contains(z) {
                    return bad(format!("two_projection needs -1 <= z <= 1, got {z}"));
                }
            }
            ZooSpec::UniversalPair { fibers } => {
                if *fibers < 2 {
                    return bad(format!("universal_pair needs at least 2 fibers, got {fibers}"));
                }
            }
            ZooSpec::Hemisphere { b, n } => {
                if !(b.is_finite() && *b >= 0.0) {
                    return bad(format!("hemisphere needs b >= 0, got {b}"));
                }
                if *n < 4 {
                    return bad(format!("hemisphere needs truncation n >= 4, got {n}"));
                }
            }
            ZooSpec::PositionMomentum { n, half_width } => {
                if *n < 16 {
                    return bad(format!("position_momentum needs n >= 16, got {n}"));
                }
                if !(half_width.is_finite() && *half_width > 0.0) {
                    return bad(format!("position_momentum needs half_width > 0, got {half_width}"));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<HermitianTuple> {
        self.validate()?;
        match self {
            ZooSpec::CommutingPoints { points } => commuting_points(points),
            ZooSpec::Pauli => HermitianTuple::new(vec![pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()]),
            ZooSpec::TwoProjection { z } => {
                let (u, v) = two_projection(*z)?;
                HermitianTuple::new(vec![u, v])
            }
            ZooSpec::UniversalPair { fibers } => universal_pair(&uniform_z_grid(*fibers)),
            ZooSpec::Hemisphere { b, n } => hemisphere(*b, *n),
            ZooSpec::PositionMomentum { n, half_width } => position_momentum(*n, *half_width),
        }
    }
}

fn commuting_points(points: &[Vec<f64>]) -> Result<HermitianTuple> {
    let d = points[0].len();
    HermitianTuple::new(
        (0..d)
            .map(|j| HermitianMatrix::diagonal(&points.iter().map(|p| p[j]).collect::<Vec<_>>()))
            .collect(),
    )
}

/// The pair `U = σz`, `V_z = [[z, √(1−z²)], [√(1−z²), −z]]`.
pub fn two_projection(z: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("z must lie in [-1, 1], got {z}")));
    }
    let s = (1.0 - z * z).max(0.0).sqrt();
    let v = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[z, s], &[s, -z]])?)?;
    Ok((pauli::sigma_z(), v))
}

/// `n ≥ 2` evenly spaced samples of `[−1, 1]`, endpoints included.
pub fn uniform_z_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|k| (-1.0 + 2.0 * k as f64 / (n - 1) as f64).clamp(-1.0, 1.0))
        .collect()
}

/// Evenly spaced samples of `[−1, 1]` with spacing at most `h`.
pub fn z_grid_with_spacing(h: f64) -> Result<Vec<f64>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!("fiber spacing must be positive, got {h}")));
    }
    Ok(uniform_z_grid((2.0 / h).ceil() as usize + 1))
}

/// Block-diagonal direct sum of the pairs `(U, V_z)` over `z_grid`.
pub fn universal_pair(z_grid: &[f64]) -> Result<HermitianTuple> {
    if z_grid.is_empty() {
        return Err(Error::InvalidArgument("empty fiber grid".into()));
    }
    let n = 2 * z_grid.len();
    let mut u = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, &z) in z_grid.iter().enumerate() {
        let (uk, vk) = two_projection(z)?;
        for r in 0..2 {
            for c in 0..2 {
                u[(2 * k + r, 2 * k + c)] = uk[(r, c)];
                v[(2 * k + r, 2 * k + c)] = vk[(r, c)];
            }
        }
    }
    HermitianTuple::new(vec![HermitianMatrix::new(u)?, HermitianMatrix::new(v)?])
}

/// `N×N` truncations of `½(S + S*)`, `(i/2)(S* − S)` and `b·e₁e₁*`.
pub fn hemisphere(b: f64, n: usize) -> Result<HermitianTuple> {
    let mut a1 = ComplexMatrix::zeros(n, n);
    let mut a2 = ComplexMatrix::zeros(n, n);
    for k in 0..n - 1 {
        a1[(k, k + 1)] = C64::new(0.5, 0.0);
        a1[(k + 1, k)] = C64::new(0.5, 0.0);
        a2[(k, k + 1)] = C64::new(0.0, -0.5);
        a2[(k + 1, k)] = C64::new(0.0, 0.5);
    }
    let mut a3 = ComplexMatrix::zeros(n, n);
    a3[(0, 0)] = C64::new(b, 0.0);
    HermitianTuple::new(vec![
        HermitianMatrix::new(a1)?,
        HermitianMatrix::new(a2)?,
        HermitianMatrix::new(a3)?,
    ])
}

/// Symmetry of the hemisphere tuple under rotation by `θ` about the third
/// axis: returns the orthogonal `U` and the diagonal unitary
/// `Q = diag(e^{ikθ})` with `Q(Σ_s U_{js} A_s)Q* = A_j`.
pub fn hemisphere_rotation(n: usize, theta: f64) -> (Vec<Vec<f64>>, ComplexMatrix) {
    let (s, c) = theta.sin_cos();
    let u = vec![vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]];
    let q = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::from_polar(1.0, i as f64 * theta)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    (u, q)
}

/// Grid `x_k` of `n` points on `[−L, L]`.
pub fn position_grid(n: usize, half_width: f64) -> Vec<f64> {
    let h = 2.0 * half_width / (n - 1) as f64;
    (0..n).map(|k| -half_width + k as f64 * h).collect()
}

/// Discretized `(P, Q)`: `Q = diag(x_k)` and `P` the central difference
/// `−i d/dx` with zero boundary values.
pub fn position_momentum(n: usize, half_width: f64) -> Result<HermitianTuple> {
    let xs = position_grid(n, half_width);
    let h = xs[1] - xs[0];
    let mut p = ComplexMatrix::zeros(n, n);
    for k in 0..n - 1 {
        p[(k, k + 1)] = C64::new(0.0, -0.5 / h);
        p[(k + 1, k)] = C64::new(0.0, 0.5 / h);
    }
    HermitianTuple::new(vec![HermitianMatrix::new(p)?, HermitianMatrix::diagonal(&xs)])
}

/// Largest deviation of `([P, Q] + iI)f` from zero on interior rows, over
/// the constant and linear grid functions `f`, where the central
/// difference is exact.
pub fn interior_commutator_defect(pq: &HermitianTuple) -> Result<f64> {
    if pq.d() != 2 {
        return Err(Error::DimensionMismatch("expected the pair (P, Q)".into()));
    }
    let n = pq.dim();
    let (p, q) = (pq.op(0).as_matrix(), pq.op(1).as_matrix());
    let c = ComplexMatrix::commutator(p, q)?;
    let xs: Vec<f64> = (0..n).map(|k| q[(k, k)].re).collect();
    let mut worst: f64 = 0.0;
    for f in [vec![1.0; n], xs.clone()] {
        let fv: Vec<C64> = f.iter().map(|&t| C64::new(t, 0.0)).collect();
        let cf = c.mul_vec(&fv);
        for k in 1..n - 1 {
            let r = cf[k] + C64::new(0.0, 1.0) * fv[k];
            worst = worst.max(r.norm() / f[k].abs().max(1.0));
        }
    }
    Ok(worst)
}

fn checked_sqrt(radicand: f64) -> Result<f64> {
    if radicand < -1e-9 {
        return Err(Error::InvalidArgument(format!(
            "negative radicand {radicand:e} in closed-form evaluation"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

fn check_z(z: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("z must lie in [-1, 1], got {z}")));
    }
    Ok(())
}

/// `μ^Q` of `(U, V_z)` at `(x, y)`.
pub fn mu_q_two_projection_closed(x: f64, y: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    let inner = checked_sqrt(x * x + 2.0 * z * x * y + y * y)?;
    checked_sqrt(x * x + y * y + 2.0 - 2.0 * inner)
}

/// `μ^C` of `(U, V_z)` at `(x, y)`.
pub fn mu_c_two_projection_closed(x: f64, y: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    let inner = checked_sqrt(x * x + 2.0 * x * y * z + y * y + 1.0 - z * z)?;
    checked_sqrt(x * x + y * y + 2.0 - 2.0 * inner)
}

/// `μ^Q` of the universal pair: distance to `{(±1, ±1)}`.
pub fn mu_q_universal_closed(x: f64, y: f64) -> f64 {
    let dx = (x.abs() - 1.0).abs();
    let dy = (y.abs() - 1.0).abs();
    dx.hypot(dy)
}

/// `μ^C` of the universal pair. For `|xy| ≤ 1` this is
/// `√(x²+y²+2−2√(x²y²+x²+y²+1)) = |√(1+x²) − √(1+y²)|`; otherwise it
/// coincides with `μ^Q`.
pub fn mu_c_universal_closed(x: f64, y: f64) -> f64 {
    if (x * y).abs() <= 1.0 {
        ((1.0 + x * x).sqrt() - (1.0 + y * y).sqrt()).abs()
    } else {
        mu_q_universal_closed(x, y)
    }
}

/// Fiber-minimized pseudospectra of the universal pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalValues {
    pub mu_q: f64,
    pub mu_c: f64,
    /// fiber attaining `mu_c`
    pub z_c: f64,
    /// fiber attaining `mu_q`
    pub z_q: f64,
}

/// Minimizes the two-projection closed forms over the fibers in `z_grid`.
pub fn universal_pair_pseudospectra(x: f64, y: f64, z_grid: &[f64]) -> Result<UniversalValues> {
    if z_grid.is_empty() {
        return Err(Error::InvalidArgument("empty fiber grid".into()));
    }
    let mut best = UniversalValues {
        mu_q: f64::INFINITY,
        mu_c: f64::INFINITY,
        z_c: f64::NAN,
        z_q: f64::NAN,
    };
    for &z in z_grid {
        let q = mu_q_two_projection_closed(x, y, z)?;
        let c = mu_c_two_projection_closed(x, y, z)?;
        if q < best.mu_q {
            best.mu_q = q;
            best.z_q = z;
        }
        if c < best.mu_c {
            best.mu_c = c;
            best.z_c = z;
        }
    }
    Ok(best)
}
