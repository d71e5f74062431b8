//! Transfer-matrix analysis of the truncated Toeplitz triple
//! `(½(S + S*), (i/2)(S* − S), b·e₁e₁*)`.
//!
//! By rotational symmetry it suffices to study the localizer at
//! `λ = (x, 0, z)` with `x ≥ 0`. That localizer is tridiagonal, and a null
//! vector `a = (1, a₂, a₃, …)` obeys `(a_{2n}, a_{2n+1}) = M (a_{2n−2}, a_{2n−1})`
//! with the transfer matrix
//!
//! ```text
//! M = [[1/x, −z/x], [−z/x, (x² + z²)/x]],   det M = 1,
//! ```
//!
//! started from `v₀ = ((b − z)/x, x + (b − z)²/x)`. A square-summable null
//! vector exists exactly when `v₀` is an eigenvector of `M` for its
//! eigenvalue in `(0, 1)`.
//!
//! Results for `b ≠ 1` are experimental: the surface polynomial is taken as
//! given and the eigenvalue test is numeric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::par::{map_indexed, ExecPolicy};
use crate::pseudospectra::Evaluator;
use crate::zoo::hemisphere;

/// Largest `b` for which the surface description is claimed to hold.
pub const B_VALIDITY_LIMIT: f64 = 2.25;

/// `e(x, z) = x⁴ − z⁴ + 3z³ − 4z² + 3z − 1`.
pub fn e_poly(x: f64, z: f64) -> f64 {
    x.powi(4) - z.powi(4) + 3.0 * z.powi(3) - 4.0 * z * z + 3.0 * z - 1.0
}

/// `f(x, z) = x²z − xz + x + z³ − 2z² + 2z − 1`.
pub fn f_poly(x: f64, z: f64) -> f64 {
    x * x * z - x * z + x + z.powi(3) - 2.0 * z * z + 2.0 * z - 1.0
}

/// `f_b(x, z) = x²z + x(b − z) + z(b − z)² − (b − z)`; the sign condition
/// that places the eigenvalue of `v₀` inside `(0, 1)`. Equals [`f_poly`] at
/// `b = 1`.
pub fn f_poly_b(b: f64, x: f64, z: f64) -> f64 {
    let c = b - z;
    x * x * z + x * c + z * c * c - c
}

/// `∂f/∂z = x² − x + 3z² − 4z + 2`.
pub fn f_poly_dz(x: f64, z: f64) -> f64 {
    x * x - x + 3.0 * z * z - 4.0 * z + 2.0
}

/// The surface whose zero set, within `0 ≤ z ≤ b` and `r ≤ 1`, is the
/// discrete Clifford spectrum for general `b`.
pub fn general_b_surface(b: f64, r: f64, z: f64) -> f64 {
    let (b2, b3, b4) = (b * b, b.powi(3), b.powi(4));
    let r2 = r * r;
    b4 * z + b3 * r2 - 3.0 * b3 * z * z - b3 - b2 * r2 * z + 3.0 * b2 * z.powi(3) + 2.0 * b2 * z + b * r2 * r2
        - b * r2
        - b * z.powi(4)
        - b * z * z
        + r2 * z
}

/// Closed-form `x(z) = |z − 1|^{1/2} (z² − z + 1)^{1/4}` on `e = 0`.
pub fn curve_x_b1(z: f64) -> f64 {
    (z - 1.0).abs().sqrt() * (z * z - z + 1.0).powf(0.25)
}

/// `f` restricted to the `e = 0` curve.
pub fn f_e(z: f64) -> f64 {
    let q = z * z - z + 1.0;
    let a = (z - 1.0).abs();
    z * a * q.sqrt() - (z - 1.0) * a.sqrt() * q.powf(0.25) + (z - 1.0) * q
}

/// Transfer data at `(x, z)` for the triple with parameter `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferState {
    pub b: f64,
    pub x: f64,
    pub z: f64,
    pub m: [[f64; 2]; 2],
    pub v0: [f64; 2],
}

impl TransferState {
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Eigenvalues `(small, large)` of `M`. They are real with product 1
    /// since `Tr M ≥ 2`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let disc = (t * t - 4.0).max(0.0).sqrt();
        let large = 0.5 * (t + disc);
        (self.det() / large, large)
    }

    /// Unit eigenvector of `M` for the eigenvalue `mu`.
    fn eigenvector(&self, mu: f64) -> [f64; 2] {
        let [[a, c], [_, d]] = self.m;
        let u1 = [c, mu - a];
        let u2 = [mu - d, c];
        let n1 = u1[0].hypot(u1[1]);
        let n2 = u2[0].hypot(u2[1]);
        let (u, n) = if n1 >= n2 { (u1, n1) } else { (u2, n2) };
        if n == 0.0 {
            return [1.0, 0.0];
        }
        [u[0] / n, u[1] / n]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }
}

/// Transfer state of the `b = 1` triple.
pub fn transfer_state(x: f64, z: f64) -> Result<TransferState> {
    transfer_state_b(1.0, x, z)
}

/// Transfer state for general `b`. Requires `x > 0`; the line `x = 0` is
/// covered by [`special_cases`].
pub fn transfer_state_b(b: f64, x: f64, z: f64) -> Result<TransferState> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "transfer matrix needs x > 0, got {x}; use special_cases for x = 0"
        )));
    }
    if !(z.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("b and z must be finite".into()));
    }
    let c = b - z;
    Ok(TransferState {
        b,
        x,
        z,
        m: [[1.0 / x, -z / x], [-z / x, (x * x + z * z) / x]],
        v0: [c / x, x + c * c / x],
    })
}

/// Outcome of the eigenvector test on `v₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub is_member: bool,
    /// eigenvalue of `M` in `(0, 1]`
    pub eig_small: f64,
    /// `‖Mv₀ − μ v₀‖ / (‖M‖ ‖v₀‖)`
    pub residual: f64,
}

/// `v₀` must be an eigenvector of `M` for the eigenvalue strictly inside
/// `(0, 1)`; a double eigenvalue (`x = 1`, `z = 0`) is excluded.
pub fn eigen_membership(state: &TransferState, tol: f64) -> Membership {
    let (mu, large) = state.eigenvalues();
    let mv = state.apply(state.v0);
    let r = [mv[0] - mu * state.v0[0], mv[1] - mu * state.v0[1]];
    let v_norm = state.v0[0].hypot(state.v0[1]);
    let residual = if v_norm == 0.0 {
        f64::INFINITY
    } else {
        r[0].hypot(r[1]) / (large * v_norm)
    };
    Membership {
        is_member: residual <= tol && mu > 0.0 && mu < 1.0 && large > mu,
        eig_small: mu,
        residual,
    }
}

/// `‖L_{(x,0,z)} a‖ / ‖a‖` for the candidate null vector `a` of the `b = 1`
/// triple truncated to size `n`.
pub fn null_vector_residual(x: f64, z: f64, n: usize) -> Result<f64> {
    null_vector_residual_b(1.0, x, z, n)
}

/// Builds `a = (1, w₁, w₂, …)` with `w_k = μ^{k−1} P v₀`, where `μ` is the
/// small eigenvalue of `M` and `P` the orthogonal projector onto its
/// eigenvector, and evaluates the relative residual against the truncated
/// localizer. On the curve `Pv₀ = v₀` and `a` is the recurrence solution,
/// so the residual is the boundary term of order `μ^n`. Off the curve the
/// first two rows leave a residual proportional to `‖v₀ − Pv₀‖`.
///
/// Iterating `M` forward instead would amplify the rounding error in `v₀`
/// by the large eigenvalue at every step.
pub fn null_vector_residual_b(b: f64, x: f64, z: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("truncation must be at least 4, got {n}")));
    }
    let state = transfer_state_b(b, x, z)?;
    let (mu, _) = state.eigenvalues();
    let u = state.eigenvector(mu);
    let proj = u[0] * state.v0[0] + u[1] * state.v0[1];
    let w = [proj * u[0], proj * u[1]];
    let len = 2 * n;
    let mut a = vec![C64::new(0.0, 0.0); len];
    a[0] = C64::new(1.0, 0.0);
    let mut scale = 1.0;
    let mut k = 1;
    while k < len {
        a[k] = C64::new(scale * w[0], 0.0);
        if k + 1 < len {
            a[k + 1] = C64::new(scale * w[1], 0.0);
        }
        scale *= mu;
        k += 2;
    }
    let tuple = hemisphere(b, n)?;
    let ev = Evaluator::new(&tuple)?;
    let la = ev.localizer_band(&[x, 0.0, z]).mul_vec(&a);
    let num = la.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let den = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    Ok(num / den)
}

/// The `x = 0` blocks of the localizer and their determinants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCaseReport {
    pub b: f64,
    pub z: f64,
    /// `[b − z]`, `[[z − b, 1], [1, −z]]`, `[[z, 1], [1, −z]]`
    pub blocks: Vec<Vec<Vec<f64>>>,
    /// `b − z`, `−z² + bz − 1`, `−z² − 1`
    pub determinants: [f64; 3],
    pub singular: bool,
}

/// At `x = 0` the localizer splits into a `1×1` block, one `2×2` block that
/// sees `b`, and repeated copies of `[[z, 1], [1, −z]]`.
pub fn special_cases(b: f64, z: f64, tol: f64) -> SpecialCaseReport {
    let blocks = vec![
        vec![vec![b - z]],
        vec![vec![z - b, 1.0], vec![1.0, -z]],
        vec![vec![z, 1.0], vec![1.0, -z]],
    ];
    let determinants = [b - z, -z * z + b * z - 1.0, -z * z - 1.0];
    SpecialCaseReport {
        b,
        z,
        blocks,
        determinants,
        singular: determinants.iter().any(|d| d.abs() <= tol),
    }
}

/// Why a candidate point is or is not part of the discrete spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveStatus {
    /// on the surface with `f` of the right sign and a contracting eigenvector
    Accepted,
    /// `x = 0`, decided by the block determinants
    SpecialCase,
    /// double eigenvalue of `M`; lies on the essential circle
    Endpoint,
    /// outside `0 ≤ z ≤ b`, `r ≤ 1`
    RejectedConstraint,
    /// `f` has the wrong sign
    RejectedSign,
    /// `v₀` is not in the contracting eigenspace
    RejectedEigen,
    /// no root of the surface polynomial in `r ∈ [0, 1.2]`
    NoRoot,
    /// `b = 0`: the whole disk `r ≤ 1` at `z = 0`
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub b: f64,
    pub x: f64,
    pub z: f64,
    pub e_val: f64,
    pub f_val: f64,
    pub eig_small: f64,
    pub residual: f64,
    pub status: CurveStatus,
}

impl CurvePoint {
    pub fn is_accepted(&self) -> bool {
        matches!(self.status, CurveStatus::Accepted | CurveStatus::SpecialCase)
    }
}

/// Curve tracing settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub curve_tol: f64,
    pub member_tol: f64,
    /// truncation used for the null-vector residual; `None` skips it
    pub residual_n: Option<usize>,
    pub policy: ExecPolicy,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            curve_tol: 1e-10,
            member_tol: 1e-8,
            residual_n: None,
            policy: ExecPolicy::Auto,
        }
    }
}

/// Nonnegative roots `r ≤ 1.2` of the surface polynomial at fixed `z`.
///
/// The polynomial is quadratic in `s = r²`:
/// `b s² + (b³ − b²z − b + z) s + c₀(z) = 0`.
pub fn surface_roots(b: f64, z: f64) -> Vec<f64> {
    let c0 = general_b_surface(b, 0.0, z);
    let c1 = b.powi(3) - b * b * z - b + z;
    let c2 = b;
    let mut s_roots = Vec::new();
    if c2 == 0.0 {
        if c1 != 0.0 {
            s_roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
            if q != 0.0 {
                s_roots.push(q / c2);
                s_roots.push(c0 / q);
            } else {
                s_roots.push(0.0);
            }
        }
    }
    let mut r: Vec<f64> = s_roots
        .into_iter()
        .filter(|s| (-1e-14..=1.44).contains(s))
        .map(|s| s.max(0.0).sqrt())
        .collect();
    r.sort_by(f64::total_cmp);
    r.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    r
}

/// Points of the discrete Clifford spectrum in the half-plane `(x ≥ 0, 0, z)`
/// at each `z` sample. For `b = 1` the closed form for `x(z)` is used;
/// otherwise every admissible root of the surface polynomial is classified.
/// Every candidate is returned with its status, none are dropped.
pub fn curve_trace(b: f64, z_samples: &[f64], opts: &CurveOptions) -> Result<Vec<CurvePoint>> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::InvalidArgument(format!("b must be >= 0, got {b}")));
    }
    if z_samples.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidArgument("z samples must be finite".into()));
    }
    if b == 0.0 {
        return Ok(degenerate_disk(z_samples.len().max(2)));
    }
    let per_sample: Vec<Result<Vec<CurvePoint>>> = map_indexed(opts.policy, z_samples.len(), |i| {
        let z = z_samples[i];
        let xs = if b == 1.0 { vec![curve_x_b1(z)] } else { surface_roots(b, z) };
        if xs.is_empty() {
            return Ok(vec![CurvePoint {
                b,
                x: f64::NAN,
                z,
                e_val: f64::NAN,
                f_val: f64::NAN,
                eig_small: f64::NAN,
                residual: f64::NAN,
                status: CurveStatus::NoRoot,
            }]);
        }
        xs.into_iter().map(|x| classify(b, x, z, opts)).collect()
    });
    let mut out = Vec::new();
    for pts in per_sample {
        out.extend(pts?);
    }
    Ok(out)
}

/// The `b = 0` spectrum is the disk `r ≤ 1` at `z = 0`: emitted as the
/// radial segment `x ∈ [0, 1]`.
fn degenerate_disk(count: usize) -> Vec<CurvePoint> {
    (0..count)
        .map(|k| {
            let x = k as f64 / (count - 1) as f64;
            CurvePoint {
                b: 0.0,
                x,
                z: 0.0,
                e_val: general_b_surface(0.0, x, 0.0),
                f_val: f64::NAN,
                eig_small: f64::NAN,
                residual: f64::NAN,
                status: CurveStatus::Degenerate,
            }
        })
        .collect()
}

fn classify(b: f64, x: f64, z: f64, opts: &CurveOptions) -> Result<CurvePoint> {
    let e_val = general_b_surface(b, x, z);
    let f_val = f_poly_b(b, x, z);
    let mut p = CurvePoint {
        b,
        x,
        z,
        e_val,
        f_val,
        eig_small: f64::NAN,
        residual: f64::NAN,
        status: CurveStatus::Accepted,
    };
    if z < -opts.curve_tol || z > b + opts.curve_tol || x > 1.0 + opts.curve_tol {
        p.status = CurveStatus::RejectedConstraint;
        return Ok(p);
    }
    if x <= opts.curve_tol {
        let sc = special_cases(b, z, opts.curve_tol.max(1e-12));
        p.status = if sc.singular {
            CurveStatus::SpecialCase
        } else {
            CurveStatus::RejectedEigen
        };
        return Ok(p);
    }
    let state = transfer_state_b(b, x, z)?;
    let m = eigen_membership(&state, opts.member_tol);
    p.eig_small = m.eig_small;
    if let Some(n) = opts.residual_n {
        p.residual = null_vector_residual_b(b, x, z, n)?;
    }
    if (m.eig_small - 1.0).abs() <= 1e-7 {
        p.status = CurveStatus::Endpoint;
        return Ok(p);
    }
    let sign_ok = if z < b {
        f_val >= -opts.curve_tol
    } else {
        f_val <= opts.curve_tol
    };
    p.status = if !sign_ok {
        CurveStatus::RejectedSign
    } else if !m.is_member {
        CurveStatus::RejectedEigen
    } else {
        CurveStatus::Accepted
    };
    Ok(p)
}

/// One sample of [`appendix_inequality_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalitySample {
    pub z: f64,
    pub f_e: f64,
    /// +1 when `f_e ≥ 0` is required, −1 when `f_e ≤ 0` is required
    pub required_sign: i8,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub samples: Vec<InequalitySample>,
    pub passed: bool,
}

/// Checks `f_e ≥ 0` on `[0, 1]`, `f_e ≤ 0` on `(−∞, 0]` and `f_e ≥ 0` on
/// `[1, ∞)` at each sample, with an absolute slack of `tol`.
pub fn appendix_inequality_check(z_samples: &[f64], tol: f64) -> InequalityReport {
    let samples: Vec<InequalitySample> = z_samples
        .iter()
        .map(|&z| {
            let v = f_e(z);
            let required_sign = if z < 0.0 { -1 } else { 1 };
            let passed = if required_sign < 0 { v <= tol } else { v >= -tol };
            InequalitySample {
                z,
                f_e: v,
                required_sign,
                passed,
            }
        })
        .collect();
    let passed = samples.iter().all(|s| s.passed);
    InequalityReport { samples, passed }
}

/// Whether `b` is outside the range where the surface description is
/// claimed.
pub fn b_out_of_validity_range(b: f64) -> bool {
    b > B_VALIDITY_LIMIT
}
