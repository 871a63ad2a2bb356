//! Clifford group elements as binary symplectic tableaus with sign tracking.
//!
//! An element is stored by the images of the generating Paulis under
//! conjugation: `U X_j U^dag` and `U Z_j U^dag`, each a Hermitian
//! [`PauliOperator`]. This pins the unitary down to a global phase, so
//! tableau equality is projective equality and group orders come out in
//! their standard projective counts.
//!
//! The symplectic view groups the image bit rows as a `2n x 2n` matrix over
//! GF(2) (rows `0..n` are the X images, rows `n..2n` the Z images, columns
//! `(x | z)`), plus one sign bit per row.

use crate::cmat::{C64, CMat, ZERO};
use crate::error::{Error, Result};
use crate::pauli::{MAX_DENSE_QUBITS, PauliKind, PauliOperator};
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordElement {
    n: u8,
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
}

/// Hashable canonical form: all tableau bits packed into two words.
/// Sufficient for n <= 5 (110 bits).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CliffordKey {
    n: u8,
    words: [u64; 2],
}

impl CliffordKey {
    pub fn packed_words(&self) -> (u64, u64) {
        (self.words[0], self.words[1])
    }

    pub fn from_packed(n: usize, words: [u64; 2]) -> Self {
        Self { n: n as u8, words }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }
}

struct BitPacker {
    words: [u64; 2],
    cursor: usize,
}

impl BitPacker {
    fn new() -> Self {
        Self { words: [0; 2], cursor: 0 }
    }

    fn push(&mut self, value: u32, bits: usize) {
        for i in 0..bits {
            if value >> i & 1 == 1 {
                self.words[self.cursor / 64] |= 1u64 << (self.cursor % 64);
            }
            self.cursor += 1;
        }
    }
}

struct BitUnpacker {
    words: [u64; 2],
    cursor: usize,
}

impl BitUnpacker {
    fn pull(&mut self, bits: usize) -> u32 {
        let mut v = 0u32;
        for i in 0..bits {
            if self.words[self.cursor / 64] >> (self.cursor % 64) & 1 == 1 {
                v |= 1 << i;
            }
            self.cursor += 1;
        }
        v
    }
}

impl CliffordElement {
    pub fn identity(n: usize) -> Self {
        let x_images = (0..n).map(|j| PauliOperator::single(n, j, PauliKind::X)).collect();
        let z_images = (0..n).map(|j| PauliOperator::single(n, j, PauliKind::Z)).collect();
        Self { n: n as u8, x_images, z_images }
    }

    /// Build from conjugation images, validating the group constraints.
    pub fn from_images(
        n: usize,
        x_images: Vec<PauliOperator>,
        z_images: Vec<PauliOperator>,
    ) -> Result<Self> {
        if x_images.len() != n || z_images.len() != n {
            return Err(Error::DimensionMismatch { left: x_images.len(), right: n });
        }
        let elem = Self { n: n as u8, x_images, z_images };
        if !elem.is_valid() {
            return Err(Error::InvalidParameter(alloc::format!(
                "images do not form a valid {n}-qubit Clifford tableau"
            )));
        }
        Ok(elem)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_image(&self, j: usize) -> &PauliOperator {
        &self.x_images[j]
    }

    pub fn z_image(&self, j: usize) -> &PauliOperator {
        &self.z_images[j]
    }

    /// Tableau validity: images Hermitian and commutation relations preserved.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        let all = |imgs: &[PauliOperator]| imgs.iter().all(|p| p.is_hermitian() && p.n() == n);
        if !all(&self.x_images) || !all(&self.z_images) {
            return false;
        }
        for j in 0..n {
            for k in 0..n {
                if !self.x_images[j].commutes_with(&self.x_images[k]) {
                    return false;
                }
                if !self.z_images[j].commutes_with(&self.z_images[k]) {
                    return false;
                }
                let want_anticommute = j == k;
                if self.x_images[j].commutes_with(&self.z_images[k]) == want_anticommute {
                    return false;
                }
            }
        }
        true
    }

    /// The 2n x 2n symplectic matrix over GF(2), row per image, columns (x|z).
    pub fn symplectic_matrix(&self) -> Vec<u32> {
        let n = self.n();
        let mut rows = Vec::with_capacity(2 * n);
        for p in self.x_images.iter().chain(self.z_images.iter()) {
            rows.push(p.x_bits() | (p.z_bits() << n));
        }
        rows
    }

    /// Sign bits per tableau row (X images first).
    pub fn phase_bits(&self) -> Vec<bool> {
        self.x_images.iter().chain(self.z_images.iter()).map(|p| p.sign_bit()).collect()
    }

    /// Check `M^T Omega M = Omega` over GF(2) for the symplectic matrix.
    pub fn preserves_symplectic_form(&self) -> bool {
        let n = self.n();
        let rows = self.symplectic_matrix();
        let form = |a: u32, b: u32| -> u32 {
            let (ax, az) = (a & ((1 << n) - 1), a >> n);
            let (bx, bz) = (b & ((1 << n) - 1), b >> n);
            ((ax & bz).count_ones() + (az & bx).count_ones()) % 2
        };
        for i in 0..2 * n {
            for j in 0..2 * n {
                let expect = u32::from(i + n == j || j + n == i);
                if form(rows[i], rows[j]) != expect {
                    return false;
                }
            }
        }
        true
    }

    /// Image of an arbitrary Pauli under conjugation by this element.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> PauliOperator {
        debug_assert_eq!(p.n(), self.n());
        let mut out = PauliOperator::from_parts(self.n(), 0, 0, p.phase_exponent());
        // X^x Z^z expands as prod_j X_j^{x_j} prod_j Z_j^{z_j}; conjugation
        // maps each factor to its stored image.
        for j in 0..self.n() {
            if p.x_bit(j) {
                out = out.mul(&self.x_images[j]);
            }
        }
        for j in 0..self.n() {
            if p.z_bit(j) {
                out = out.mul(&self.z_images[j]);
            }
        }
        out
    }

    /// Group product: `to_unitary(a.compose(b)) = to_unitary(a) * to_unitary(b)`
    /// up to global phase (b acts first).
    pub fn compose(&self, other: &CliffordElement) -> Result<CliffordElement> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        let x_images = other.x_images.iter().map(|p| self.conjugate_pauli(p)).collect();
        let z_images = other.z_images.iter().map(|p| self.conjugate_pauli(p)).collect();
        Ok(CliffordElement { n: self.n, x_images, z_images })
    }

    /// Group inverse via the symplectic inverse `Omega M^T Omega`, with signs
    /// fixed by conjugating each candidate image forward.
    pub fn inverse(&self) -> CliffordElement {
        let n = self.n();
        let rows = self.symplectic_matrix();
        // M_inv[i][j] = (Omega M^T Omega)[i][j] = M[swap(j)][swap(i)]
        // where swap exchanges the x and z halves of an index.
        let swap = |i: usize| if i < n { i + n } else { i - n };
        let bit = |r: usize, c: usize| rows[r] >> c & 1 == 1;
        let mut inv_rows = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let mut row = 0u32;
            for j in 0..2 * n {
                if bit(swap(j), swap(i)) {
                    row |= 1 << j;
                }
            }
            inv_rows.push(row);
        }
        let mask = (1u32 << n) - 1;
        // Candidate images carry the right support; signs are fixed below by
        // conjugating forward and comparing.
        let build = |row: u32| PauliOperator::positive(n, row & mask, row >> n);
        let mut x_images: Vec<PauliOperator> = (0..n).map(|j| build(inv_rows[j])).collect();
        let mut z_images: Vec<PauliOperator> = (0..n).map(|j| build(inv_rows[n + j])).collect();
        for j in 0..n {
            let target = PauliOperator::single(n, j, PauliKind::X);
            if self.conjugate_pauli(&x_images[j]) != target {
                x_images[j] = x_images[j].negate();
            }
            debug_assert_eq!(self.conjugate_pauli(&x_images[j]), target);
            let target = PauliOperator::single(n, j, PauliKind::Z);
            if self.conjugate_pauli(&z_images[j]) != target {
                z_images[j] = z_images[j].negate();
            }
            debug_assert_eq!(self.conjugate_pauli(&z_images[j]), target);
        }
        CliffordElement { n: self.n, x_images, z_images }
    }

    /// Canonical hashable key (projective equality).
    pub fn canonical_key(&self) -> CliffordKey {
        let n = self.n();
        let mut packer = BitPacker::new();
        for p in self.x_images.iter().chain(self.z_images.iter()) {
            packer.push(p.x_bits(), n);
            packer.push(p.z_bits(), n);
            packer.push(u32::from(p.sign_bit()), 1);
        }
        CliffordKey { n: self.n, words: packer.words }
    }

    /// Rebuild an element from its canonical key.
    pub fn from_canonical_key(key: &CliffordKey) -> Result<CliffordElement> {
        let n = key.n as usize;
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        let mut unpacker = BitUnpacker { words: key.words, cursor: 0 };
        let mut images = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            let x = unpacker.pull(n);
            let z = unpacker.pull(n);
            let sign = unpacker.pull(1) == 1;
            let mut p = PauliOperator::positive(n, x, z);
            if sign {
                p = p.negate();
            }
            images.push(p);
        }
        let z_images = images.split_off(n);
        CliffordElement::from_images(n, images, z_images)
    }

    /// Dense unitary whose conjugation action reproduces the tableau exactly
    /// (the global phase is fixed by an arbitrary but deterministic rule).
    ///
    /// Columns are built as `U|b> = (U X^b U^dag) U|0...0>`, with `U|0...0>`
    /// the unique state stabilized by the Z images.
    pub fn to_unitary(&self) -> Result<CMat> {
        let n = self.n();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;

        // Projector onto the stabilizer state: prod_j (I + Q_j)/2.
        let mut proj = CMat::identity(dim);
        for q in self.z_images.iter() {
            proj = proj.add(&q.matrix().mul(&proj)).scale(C64::new(0.5, 0.0));
        }
        // Rank one; take the strongest column and normalize.
        let mut best_col = 0;
        let mut best_diag = -1.0;
        for k in 0..dim {
            if proj[(k, k)].re > best_diag {
                best_diag = proj[(k, k)].re;
                best_col = k;
            }
        }
        let mut psi: Vec<C64> = (0..dim).map(|i| proj[(i, best_col)]).collect();
        let norm = libm::sqrt(psi.iter().map(|a| a.norm_sqr()).sum());
        debug_assert!(norm > 1e-9, "stabilizer projector should have rank one");
        for a in psi.iter_mut() {
            *a /= C64::new(norm, 0.0);
        }
        // Deterministic global phase: first nonzero amplitude positive real.
        if let Some(a) = psi.iter().find(|a| a.norm() > 1e-9) {
            let fix = a.conj() / C64::new(a.norm(), 0.0);
            for a in psi.iter_mut() {
                *a *= fix;
            }
        }

        let mut u = CMat::zeros(dim, dim);
        for bits in 0..dim as u32 {
            // Image of X^bits, multiplied in ascending qubit order to match
            // the X^{b_0} X^{b_1} ... expansion of |b> = X^b |0>.
            let mut image = PauliOperator::identity(n);
            for j in 0..n {
                if bits >> j & 1 == 1 {
                    image = image.mul(&self.x_images[j]);
                }
            }
            let col_state = image.apply(&psi);
            // Qubit j is index bit n-1-j.
            let mut col_index = 0usize;
            for j in 0..n {
                if bits >> j & 1 == 1 {
                    col_index |= 1 << (n - 1 - j);
                }
            }
            for i in 0..dim {
                if col_state[i] != ZERO {
                    u[(i, col_index)] = col_state[i];
                }
            }
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::ONE;
    use crate::gates;

    #[test]
    fn identity_to_unitary() {
        let id = CliffordElement::identity(3);
        assert_eq!(id.to_unitary().unwrap(), CMat::identity(8));
    }

    #[test]
    fn hadamard_matrix() {
        let h = gates::hadamard(1, 0);
        let u = h.to_unitary().unwrap();
        let s = 1.0 / libm::sqrt(2.0);
        let want = CMat::from_rows(&[
            &[C64::new(s, 0.0), C64::new(s, 0.0)],
            &[C64::new(s, 0.0), C64::new(-s, 0.0)],
        ]);
        assert!(u.approx_eq_up_to_phase(&want, 1e-12));
    }

    #[test]
    fn cnot_matrix() {
        let cx = gates::cnot(2, 0, 1);
        let u = cx.to_unitary().unwrap();
        let mut want = CMat::zeros(4, 4);
        want[(0, 0)] = ONE;
        want[(1, 1)] = ONE;
        want[(2, 3)] = ONE;
        want[(3, 2)] = ONE;
        assert!(u.approx_eq_up_to_phase(&want, 1e-12));
    }

    #[test]
    fn compose_involutions() {
        let h = gates::hadamard(1, 0);
        let id = CliffordElement::identity(1);
        assert_eq!(h.compose(&h).unwrap(), id);
        let p = gates::phase_gate(1, 0);
        let z = gates::pauli_z(1, 0);
        assert_eq!(p.compose(&p).unwrap(), z);
        let cx = gates::cnot(2, 0, 1);
        assert_eq!(cx.compose(&cx).unwrap(), CliffordElement::identity(2));
    }

    #[test]
    fn compose_dimension_mismatch() {
        let h1 = gates::hadamard(1, 0);
        let h2 = gates::hadamard(2, 0);
        assert!(matches!(h1.compose(&h2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_of_basics() {
        let id = CliffordElement::identity(2);
        assert_eq!(id.inverse(), id);
        let h = gates::hadamard(1, 0);
        assert_eq!(h.inverse(), h);
        let p = gates::phase_gate(1, 0);
        assert_eq!(p.compose(&p.inverse()).unwrap(), CliffordElement::identity(1));
    }

    #[test]
    fn conjugation_matches_dense() {
        // U P U^dag computed from the tableau must match dense algebra.
        let e = gates::cnot(2, 0, 1)
            .compose(&gates::phase_gate(2, 1))
            .unwrap()
            .compose(&gates::hadamard(2, 0))
            .unwrap();
        let u = e.to_unitary().unwrap();
        for x in 0..4u32 {
            for z in 0..4u32 {
                let p = PauliOperator::positive(2, x, z);
                let lhs = e.conjugate_pauli(&p).matrix();
                let rhs = p.matrix().conjugate_with(&u);
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn key_round_trip() {
        let e = gates::hadamard(2, 0).compose(&gates::cz(2, 0, 1)).unwrap();
        let key = e.canonical_key();
        let back = CliffordElement::from_canonical_key(&key).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn symplectic_form_preserved() {
        let e = gates::cnot(3, 1, 2).compose(&gates::hadamard(3, 0)).unwrap();
        assert!(e.preserves_symplectic_form());
        assert!(e.is_valid());
    }
}
