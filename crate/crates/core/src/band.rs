//! Banded Hermitian storage and Givens band-to-tridiagonal reduction.
//!
//! The reduction eliminates each column below the first subdiagonal with
//! plane rotations and chases the resulting bulge down the band, so the
//! cost is O(n²·kd) instead of the O(n³) of dense Householder reduction.

use crate::eigen::Tridiagonal;
use crate::matrix::{HermitianMatrix, C64, ZERO};

/// Hermitian matrix with `|i - j| <= kd` support, stored with one extra
/// diagonal of headroom on each side for the bulge.
#[derive(Clone, Debug)]
pub struct BandHermitian {
    n: usize,
    kd: usize,
    /// storage half-width, `kd + 1`
    w: usize,
    data: Vec<C64>,
}

impl BandHermitian {
    pub fn zeros(n: usize, kd: usize) -> Self {
        let w = kd + 1;
        Self {
            n,
            kd,
            w,
            data: vec![ZERO; n * (2 * w + 1)],
        }
    }

    pub fn from_hermitian(m: &HermitianMatrix, kd: usize) -> Self {
        let n = m.dim();
        let mut band = Self::zeros(n, kd);
        for i in 0..n {
            let lo = i.saturating_sub(kd);
            let hi = (i + kd).min(n - 1);
            for j in lo..=hi {
                band.set(i, j, m[(i, j)]);
            }
        }
        band
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bandwidth(&self) -> usize {
        self.kd
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i.abs_diff(j) > self.w {
            None
        } else {
            Some(i * (2 * self.w + 1) + j + self.w - i)
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map_or(ZERO, |k| self.data[k])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let k = self.slot(i, j).expect("band write outside storage");
        self.data[k] = v;
    }

    /// Adds `v` at `(i, j)` and `conj(v)` at `(j, i)`; diagonal adds once.
    #[inline]
    pub fn add_hermitian(&mut self, i: usize, j: usize, v: C64) {
        if i == j {
            let k = self.slot(i, i).unwrap();
            self.data[k] += C64::new(v.re, 0.0);
        } else {
            let k = self.slot(i, j).expect("band write outside storage");
            self.data[k] += v;
            let k = self.slot(j, i).unwrap();
            self.data[k] += v.conj();
        }
    }

    /// Adds `v` at `(i, j)` only. Callers are responsible for writing the
    /// mirrored entry so that the result stays Hermitian.
    #[inline]
    pub fn add_entry(&mut self, i: usize, j: usize, v: C64) {
        let k = self.slot(i, j).expect("band write outside storage");
        self.data[k] += v;
    }

    /// Re-packs into storage of bandwidth `kd`, shrinking the rotation
    /// windows of the reduction. Keeps the current storage if that would
    /// drop a nonzero entry.
    pub fn compact(self, kd: usize) -> Self {
        if kd >= self.kd || self.effective_bandwidth() > kd {
            return self;
        }
        let mut out = Self::zeros(self.n, kd);
        for i in 0..self.n {
            let lo = i.saturating_sub(kd);
            let hi = (i + kd).min(self.n - 1);
            for j in lo..=hi {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length differs from band dimension");
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kd);
                let hi = (i + self.kd).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
            })
            .collect()
    }

    pub fn to_hermitian(&self) -> HermitianMatrix {
        let m = crate::matrix::ComplexMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j));
        HermitianMatrix::symmetrized(m)
    }

    /// Measured bandwidth after assembly; cancellations can shrink it.
    pub fn effective_bandwidth(&self) -> usize {
        let mut kd = 0;
        for i in 0..self.n {
            for j in i..(i + self.kd + 1).min(self.n) {
                if self.get(i, j) != ZERO {
                    kd = kd.max(j - i);
                }
            }
        }
        kd
    }

    /// Consumes the band and returns an orthogonally similar real symmetric
    /// tridiagonal matrix (same eigenvalues).
    pub fn into_tridiagonal(mut self) -> Tridiagonal {
        let n = self.n;
        let kd = self.effective_bandwidth();
        if kd > 1 {
            for j in 0..n.saturating_sub(2) {
                let last = (j + kd).min(n - 1);
                for k in (j + 2..=last).rev() {
                    self.rotate(k - 1, k, j);
                    let mut r = k;
                    while r + kd < n {
                        let p = r + kd;
                        if self.get(p, r - 1) == ZERO {
                            break;
                        }
                        self.rotate(p - 1, p, r - 1);
                        r = p;
                    }
                }
            }
        }
        let diag = (0..n).map(|i| self.get(i, i).re).collect();
        let off = (0..n.saturating_sub(1))
            .map(|i| self.get(i + 1, i).norm())
            .collect();
        Tridiagonal::new(diag, off)
    }

    /// Unitary similarity on indices `(a, b = a + 1)` that zeroes `(b, c)`
    /// against the pivot `(a, c)`.
    fn rotate(&mut self, a: usize, b: usize, c: usize) {
        let x = self.get(a, c);
        let y = self.get(b, c);
        if y == ZERO {
            return;
        }
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (cs, sn) = if x == ZERO {
            (0.0, C64::new(1.0, 0.0))
        } else {
            let ax = x.norm();
            (ax / r, x / ax * y.conj() / r)
        };
        // G = [[cs, sn], [-conj(sn), cs]] applied as G M G*.
        let lo = a.saturating_sub(self.w);
        let hi = (b + self.w).min(self.n - 1);
        for t in lo..=hi {
            if t == a || t == b {
                continue;
            }
            let ma = self.get(a, t);
            let mb = self.get(b, t);
            if ma == ZERO && mb == ZERO {
                continue;
            }
            let na = ma * cs + sn * mb;
            let nb = -sn.conj() * ma + mb * cs;
            self.store_pair(a, t, na);
            self.store_pair(b, t, nb);
        }
        let alpha = self.get(a, a).re;
        let beta = self.get(a, b);
        let gamma = self.get(b, b).re;
        // rows first: R = G B
        let r00 = alpha * cs + sn * beta.conj();
        let r01 = beta * cs + sn * gamma;
        let r10 = -sn.conj() * alpha + beta.conj() * cs;
        let r11 = -sn.conj() * beta + gamma * cs;
        // then R G*, with G* = [[cs, -sn], [conj(sn), cs]]
        let n00 = r00 * cs + r01 * sn.conj();
        let n01 = -r00 * sn + r01 * cs;
        let n11 = -r10 * sn + r11 * cs;
        self.set(a, a, C64::new(n00.re, 0.0));
        self.set(b, b, C64::new(n11.re, 0.0));
        self.set(a, b, n01);
        self.set(b, a, n01.conj());
        self.set(b, c, ZERO);
        self.set(c, b, ZERO);
    }

    #[inline]
    fn store_pair(&mut self, i: usize, t: usize, v: C64) {
        match self.slot(i, t) {
            Some(k) => {
                self.data[k] = v;
                let k2 = self.slot(t, i).unwrap();
                self.data[k2] = v.conj();
            }
            None => debug_assert!(v.norm() < 1e-9, "fill outside band storage: {v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eig_hermitian, tridiagonal_dense};
    use crate::matrix::ComplexMatrix;

    fn banded(n: usize, kd: usize, seed: u64) -> HermitianMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(next(), 0.0);
            for j in i + 1..(i + kd + 1).min(n) {
                let v = C64::new(next(), next());
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn band_reduction_preserves_spectrum() {
        for &(n, kd) in &[(12, 2), (20, 3), (33, 5), (9, 1), (40, 7)] {
            let m = banded(n, kd, (n * 31 + kd) as u64);
            let reference = eig_hermitian(&m).eigenvalues;
            let mut via_band = BandHermitian::from_hermitian(&m, kd).into_tridiagonal().eigenvalues();
            via_band.sort_by(f64::total_cmp);
            for (a, b) in reference.iter().zip(&via_band) {
                assert!((a - b).abs() < 1e-12, "n={n} kd={kd}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn band_and_dense_tridiagonal_forms_agree_on_extremes() {
        let m = banded(50, 4, 7);
        let t_band = BandHermitian::from_hermitian(&m, 4).into_tridiagonal();
        let t_dense = tridiagonal_dense(&m);
        assert!((t_band.min_eigenvalue() - t_dense.min_eigenvalue()).abs() < 1e-12);
        assert!((t_band.min_abs_eigenvalue() - t_dense.min_abs_eigenvalue()).abs() < 1e-12);
    }

    #[test]
    fn cancellation_reduces_effective_bandwidth() {
        let mut b = BandHermitian::zeros(6, 3);
        b.add_hermitian(0, 3, C64::new(0.5, 0.0));
        b.add_hermitian(0, 3, C64::new(-0.5, 0.0));
        b.add_hermitian(1, 2, C64::new(1.0, 0.0));
        assert_eq!(b.effective_bandwidth(), 1);
    }
}
