//! Hermitian eigensolvers and the singular-value helpers built on them.
//!
//! Full decompositions use Householder tridiagonalization followed by the
//! implicit QL iteration. Value-only queries (smallest |λ|, extreme
//! eigenvalues) go through a tridiagonal form and Sturm-sequence bisection,
//! taking the banded reduction in `band` whenever the input is narrow.

use crate::band::BandHermitian;
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64, ONE, ZERO};

/// Real symmetric tridiagonal matrix: `diag` has n entries and `off` n-1.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let max_e2 = self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * max_e2
    }

    /// Number of eigenvalues strictly below `sigma` (Sturm count).
    pub fn count_below(&self, sigma: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - sigma;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.off[i - 1];
            q = self.diag[i] - sigma - e * e / q;
            if q.abs() <= pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// k-th smallest eigenvalue (0-based) by bisection on `[lo, hi]`.
    fn bisect(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        let tol = self.resolution();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Absolute accuracy of the bisection.
    fn resolution(&self) -> f64 {
        let (gl, gu) = self.gershgorin();
        2.0 * f64::EPSILON * gl.abs().max(gu.abs()) + self.pivmin()
    }

    pub fn kth_eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim());
        let (lo, hi) = self.gershgorin();
        self.bisect(k, lo, hi)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.kth_eigenvalue(0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.kth_eigenvalue(self.dim() - 1)
    }

    /// Number of negative eigenvalues.
    pub fn negative_count(&self) -> usize {
        self.count_below(0.0)
    }

    /// Smallest |λ|, located by bracketing the eigenvalues adjacent to 0.
    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.min_abs_with_inertia().0
    }

    /// `(min |λ|, number of negative eigenvalues)`.
    pub fn min_abs_with_inertia(&self) -> (f64, usize) {
        let n = self.dim();
        let (lo, hi) = self.gershgorin();
        let neg = self.count_below(0.0);
        let mut best = f64::INFINITY;
        if neg > 0 {
            best = best.min(self.bisect(neg - 1, lo.min(0.0), 0.0).abs());
        }
        if neg < n {
            best = best.min(self.bisect(neg, 0.0, hi.max(0.0)).abs());
        }
        // below the bisection resolution an eigenvalue cannot be told apart
        // from an exact zero
        if best <= self.resolution() {
            best = 0.0;
        }
        (best, neg)
    }

    /// All eigenvalues in ascending order (implicit QL, no vectors).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        tql2(&mut d, &mut e, None);
        d.sort_by(f64::total_cmp);
        d
    }
}

/// Ascending eigenvalues with a unitary frame of eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `max_k ‖M v_k − λ_k v_k‖₂`.
    pub fn max_residual(&self, m: &HermitianMatrix) -> f64 {
        let n = m.dim();
        let mv = m.as_matrix() * &self.eigenvectors;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (mv[(i, k)] - self.eigenvectors[(i, k)] * self.eigenvalues[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `‖V*V − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        (&(&v.adjoint() * v) - &ComplexMatrix::identity(v.rows())).max_abs()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &HermitianMatrix) -> EigenDecomposition {
    let n = m.dim();
    let (tri, z) = householder(m, true);
    let mut z = z.expect("accumulated frame");
    let mut d = tri.diag;
    let mut e = tri.off;
    e.push(0.0);
    tql2(&mut d, &mut e, Some(&mut z));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| z[(i, order[j])]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Ascending eigenvalues only.
pub fn eigenvalues_hermitian(m: &HermitianMatrix) -> Vec<f64> {
    tridiagonal_form(m).eigenvalues()
}

/// Tridiagonal form by dense Householder reduction.
pub fn tridiagonal_dense(m: &HermitianMatrix) -> Tridiagonal {
    householder(m, false).0
}

/// Tridiagonal form, taking the banded route for narrow matrices.
pub fn tridiagonal_form(m: &HermitianMatrix) -> Tridiagonal {
    let n = m.dim();
    let kd = m.as_matrix().bandwidth();
    if kd <= 1 || (kd + 1) * 6 < n {
        BandHermitian::from_hermitian(m, kd).into_tridiagonal()
    } else {
        tridiagonal_dense(m)
    }
}

impl HermitianMatrix {
    /// Smallest |eigenvalue|, equal to the smallest singular value.
    pub fn min_abs_eigenvalue(&self) -> f64 {
        tridiagonal_form(self).min_abs_eigenvalue()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        tridiagonal_form(self).min_eigenvalue()
    }

    /// `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        let t = tridiagonal_form(self);
        t.min_eigenvalue().abs().max(t.max_eigenvalue().abs())
    }
}

/// `s_min(T) = √(λ_min(T*T))`; rectangular `T` measures the domain side.
pub fn smallest_singular_value(t: &ComplexMatrix) -> f64 {
    let gram = HermitianMatrix::symmetrized(&t.adjoint() * t);
    let tri = tridiagonal_form(&gram);
    // T*T is positive semidefinite: a nonpositive Sturm pivot means a kernel.
    if tri.negative_count() > 0 {
        return 0.0;
    }
    tri.min_eigenvalue().max(0.0).sqrt()
}

/// Largest singular value, `√(λ_max(M*M))`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = HermitianMatrix::symmetrized(&m.adjoint() * m);
    tridiagonal_form(&gram).max_eigenvalue().max(0.0).sqrt()
}

/// `V · diag(g(λₖ)) · V*`.
pub fn matrix_function_hermitian(m: &HermitianMatrix, g: impl Fn(f64) -> f64) -> HermitianMatrix {
    let eig = eig_hermitian(m);
    let n = m.dim();
    let v = &eig.eigenvectors;
    let gv: Vec<f64> = eig.eigenvalues.iter().map(|&x| g(x)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s: C64 = (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * gv[k]).sum();
            out[(i, j)] = s;
            out[(j, i)] = s.conj();
        }
    }
    HermitianMatrix::symmetrized(out)
}

/// Householder reduction `M = Z T Z*` with `T` real symmetric tridiagonal.
/// Off-diagonal phases are absorbed into `Z` by a diagonal unitary.
fn householder(m: &HermitianMatrix, accumulate: bool) -> (Tridiagonal, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut q = accumulate.then(|| ComplexMatrix::identity(n));
    let mut u = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let alpha = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (alpha.norm_sqr() + tail).sqrt();
        let phase = if alpha == ZERO { ONE } else { alpha / alpha.norm() };
        let m_len = n - k - 1;
        let u = &mut u[..m_len];
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = a[(k + 1 + i, k)];
        }
        u[0] += phase * xnorm;
        let unorm2 = tail + (alpha.norm() + xnorm).powi(2);
        let beta = 2.0 / unorm2;

        // p = β B u over the trailing block
        let p = &mut p[..m_len];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a.row(k + 1 + i)[k + 1..];
            *pi = row.iter().zip(u.iter()).map(|(b, x)| b * x).sum::<C64>() * beta;
        }
        let upk: f64 = u.iter().zip(p.iter()).map(|(x, y)| (x.conj() * y).re).sum();
        let kk = 0.5 * beta * upk;
        for (pi, ui) in p.iter_mut().zip(u.iter()) {
            *pi -= ui * kk;
        }
        for i in 0..m_len {
            for j in 0..m_len {
                let delta = u[i] * p[j].conj() + p[i] * u[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        let sub = -phase * xnorm;
        a[(k + 1, k)] = sub;
        a[(k, k + 1)] = sub.conj();
        for i in k + 2..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        if let Some(q) = q.as_mut() {
            for r in 0..n {
                let s: C64 = (0..m_len).map(|i| q[(r, k + 1 + i)] * u[i]).sum();
                let s = s * beta;
                for i in 0..m_len {
                    q[(r, k + 1 + i)] -= s * u[i].conj();
                }
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut phases = vec![ONE; n];
    for i in 0..n.saturating_sub(1) {
        let t = a[(i + 1, i)];
        let r = t.norm();
        off.push(r);
        phases[i + 1] = if r == 0.0 { phases[i] } else { phases[i] * (t / r) };
    }
    if let Some(q) = q.as_mut() {
        for r in 0..n {
            for (c, ph) in phases.iter().enumerate() {
                q[(r, c)] *= ph;
            }
        }
    }
    (Tridiagonal::new(diag, off), q)
}

/// Implicit QL on a real symmetric tridiagonal matrix (EISPACK tql2).
/// `e[i]` couples `i` and `i+1`; `e[n-1]` must be zero. Rotations are
/// accumulated into the columns of `z` when supplied.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut ComplexMatrix>) {
    let n = d.len();
    if n == 1 {
        return;
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                assert!(iter < 64 * n.max(8), "tql2 failed to converge");
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..z.rows() {
                            let zh = z[(k, i + 1)];
                            let zi = z[(k, i)];
                            z[(k, i + 1)] = zi * s + zh * c;
                            z[(k, i)] = zi * c - zh * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;

    #[test]
    fn diagonal_eigenvalues_are_sorted() {
        let eig = eig_hermitian(&HermitianMatrix::diagonal(&[3.0, -2.0]));
        assert_eq!(eig.eigenvalues, vec![-2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = eig_hermitian(&pauli::sigma_x());
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(eig.max_residual(&pauli::sigma_x()) < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let eig = eig_hermitian(&HermitianMatrix::diagonal(&[4.5]));
        assert_eq!(eig.eigenvalues, vec![4.5]);
        assert_eq!(eig.eigenvectors[(0, 0)], ONE);
    }

    #[test]
    fn smallest_singular_value_of_diagonal() {
        let t = ComplexMatrix::diagonal(&[3.0, -2.0]);
        assert!((smallest_singular_value(&t) - 2.0).abs() < 1e-14);
        assert!((HermitianMatrix::diagonal(&[3.0, -2.0]).min_abs_eigenvalue() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn column_shift_injection_is_an_isometry() {
        let n = 7;
        let t = ComplexMatrix::from_fn(n + 1, n, |i, j| if i == j + 1 { ONE } else { ZERO });
        assert!((smallest_singular_value(&t) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncated_forward_shift_has_a_kernel() {
        let n = 7;
        let t = ComplexMatrix::from_fn(n, n, |i, j| if i == j + 1 { ONE } else { ZERO });
        assert_eq!(smallest_singular_value(&t), 0.0);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::diagonal(&[3.0, -2.0])) - 3.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(vec![
            vec![C64::new(s, 0.0), C64::new(0.0, s)],
            vec![C64::new(0.0, s), C64::new(s, 0.0)],
        ])
        .unwrap();
        assert!((operator_norm(&u) - 1.0).abs() < 1e-14);
        let uvec = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let vvec = [C64::new(0.0, 1.0), ZERO, ZERO];
        let rank1 = ComplexMatrix::from_fn(2, 3, |i, j| uvec[i] * vvec[j].conj());
        assert!((operator_norm(&rank1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matrix_function_examples() {
        let x = pauli::sigma_x();
        let id = matrix_function_hermitian(&x, |t| t);
        assert!((id.as_matrix() - x.as_matrix()).max_abs() < 1e-14);
        let sq = matrix_function_hermitian(&x, |t| t * t);
        assert!((sq.as_matrix() - &ComplexMatrix::identity(2)).max_abs() < 1e-14);
        let bump = matrix_function_hermitian(&HermitianMatrix::diagonal(&[0.0, 2.0]), |t| (-t * t).exp());
        let expected = ComplexMatrix::diagonal(&[1.0, (-4.0f64).exp()]);
        assert!((bump.as_matrix() - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn sturm_count_matches_qr_values() {
        let t = Tridiagonal::new(vec![2.0, -1.0, 0.5, 3.0], vec![1.0, 0.3, -2.0]);
        let vals = t.eigenvalues();
        for (k, v) in vals.iter().enumerate() {
            assert!((t.kth_eigenvalue(k) - v).abs() < 1e-13);
        }
        assert_eq!(t.count_below(0.0), vals.iter().filter(|v| **v < 0.0).count());
    }

    #[test]
    fn exact_zero_eigenvalue_is_found() {
        let t = Tridiagonal::new(vec![0.0, 0.0, 0.0], vec![1.0, 0.0]);
        assert!(t.min_abs_eigenvalue() < 1e-15);
    }
}
