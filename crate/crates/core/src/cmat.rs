//! Small dense complex matrices.
//!
//! Everything in this crate lives in dimension at most 32 (five qubits), with
//! superoperators up to 256x256, so a flat row-major `Vec<Complex64>` with
//! naive O(n^3) products is all that is needed. No BLAS, no `std`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    /// Diagonal matrix from its entries.
    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let lhs = k * other.cols;
                let dst = i * other.cols;
                for j in 0..other.cols {
                    out.data[dst + j] += a * other.data[lhs + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.conj();
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// U rho U^dagger.
    pub fn conjugate_with(&self, u: &CMat) -> CMat {
        u.mul(self).mul(&u.dagger())
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = ZERO;
            let base = i * self.cols;
            for j in 0..self.cols {
                acc += self.data[base + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let prod = self.dagger().mul(self);
        prod.max_abs_diff(&CMat::identity(self.rows)) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Equality up to a global phase: other == e^{i phi} self for some phi.
    pub fn approx_eq_up_to_phase(&self, other: &CMat, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        // Pick the largest entry of self as the phase reference.
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for (idx, a) in self.data.iter().enumerate() {
            if a.norm() > best_norm {
                best_norm = a.norm();
                best = idx;
            }
        }
        if best_norm <= tol {
            return other.data.iter().all(|b| b.norm() <= tol);
        }
        let phase = other.data[best] / self.data[best];
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.scale(phase).max_abs_diff(other) <= tol
    }

    /// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        // Symmetrize to kill rounding-level asymmetry.
        a = a.add(&a.dagger()).scale(C64::new(0.5, 0.0));
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // Phase that makes the pivot real, then a standard Jacobi rotation.
                    let phi = apq / C64::new(apq.norm(), 0.0);
                    let g = apq.norm();
                    let tau = (aqq - app) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                    } else {
                        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                    };
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = t * c;
                    // A <- G^dag A G with G the identity outside the (p,q) plane and
                    // block [[c, s], [-conj(phi)*s, conj(phi)*c]] inside it.
                    for r in 0..n {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp.scale(c) - (arq * phi.conj()).scale(s);
                        a[(r, q)] = arp.scale(s) + (arq * phi.conj()).scale(c);
                    }
                    for r in 0..n {
                        let apr = a[(p, r)];
                        let aqr = a[(q, r)];
                        a[(p, r)] = apr.scale(c) - (aqr * phi).scale(s);
                        a[(q, r)] = apr.scale(s) + (aqr * phi).scale(c);
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        eigs
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Column-stacking vectorization: vec(M) lists columns top to bottom.
pub fn vectorize(m: &CMat) -> Vec<C64> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            v.push(m[(i, j)]);
        }
    }
    v
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let m = CMat::from_rows(&[
            &[C64::new(1.0, 2.0), C64::new(0.0, -1.0)],
            &[C64::new(3.0, 0.0), C64::new(0.5, 0.5)],
        ]);
        assert_eq!(m.mul(&CMat::identity(2)), m);
        assert_eq!(CMat::identity(2).mul(&m), m);
    }

    #[test]
    fn kron_dimensions_and_values() {
        let x = CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
        let z = CMat::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]);
        let xz = x.kron(&z);
        assert_eq!(xz.rows(), 4);
        assert_eq!(xz[(0, 2)], ONE);
        assert_eq!(xz[(1, 3)], -ONE);
        assert_eq!(xz[(2, 0)], ONE);
        assert_eq!(xz[(3, 1)], -ONE);
    }

    #[test]
    fn phase_comparison() {
        let m = CMat::from_rows(&[&[ONE, ZERO], &[ZERO, I]]);
        let rotated = m.scale(C64::from_polar(1.0, 0.7));
        assert!(m.approx_eq_up_to_phase(&rotated, 1e-12));
        let other = CMat::from_rows(&[&[ONE, ZERO], &[ZERO, -I]]);
        assert!(!m.approx_eq_up_to_phase(&other, 1e-12));
    }

    #[test]
    fn jacobi_matches_moments() {
        // Spectrum check through the first three power sums.
        let mut rng: u64 = 0x9e3779b97f4a7c15;
        let mut next = || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 6;
        let mut b = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = C64::new(next(), next());
            }
        }
        let h = b.add(&b.dagger());
        let eigs = h.hermitian_eigenvalues();
        let tr1: f64 = eigs.iter().sum();
        let tr2: f64 = eigs.iter().map(|x| x * x).sum();
        let tr3: f64 = eigs.iter().map(|x| x * x * x).sum();
        assert!((tr1 - h.trace().re).abs() < 1e-9);
        assert!((tr2 - h.mul(&h).trace().re).abs() < 1e-9);
        assert!((tr3 - h.mul(&h).mul(&h).trace().re).abs() < 1e-8);
    }

    #[test]
    fn unitary_check() {
        let s = 1.0 / libm::sqrt(2.0);
        let h = CMat::from_rows(&[
            &[C64::new(s, 0.0), C64::new(s, 0.0)],
            &[C64::new(s, 0.0), C64::new(-s, 0.0)],
        ]);
        assert!(h.is_unitary(1e-12));
        assert!(!h.scale(C64::new(1.1, 0.0)).is_unitary(1e-6));
    }
}
