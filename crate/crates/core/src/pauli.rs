//! n-qubit Pauli operators in binary symplectic form.
//!
//! A Pauli is stored as bit vectors `x`, `z` (bit `j` refers to qubit `j`)
//! together with a power of `i`, under the convention
//!
//! ```text
//!     P = i^phase * (X^x1 Z^z1) (x) (X^x2 Z^z2) (x) ...
//! ```
//!
//! so an `x = z = 1` qubit factor is `XZ = -iY`, and the Hermitian Y carries
//! `phase = 1`. Qubit 0 is the leftmost tensor factor and the most
//! significant bit of a computational-basis index.

use crate::cmat::{C64, CMat, ONE, ZERO};
use alloc::vec;
use alloc::vec::Vec;

/// Maximum qubit count for which dense matrices are realized.
pub const MAX_DENSE_QUBITS: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliOperator {
    n: u8,
    x: u32,
    z: u32,
    /// Power of i in {0,1,2,3}.
    phase: u8,
}

/// Single-qubit Pauli kinds used when building operators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self { n: n as u8, x: 0, z: 0, phase: 0 }
    }

    /// Hermitian single-qubit Pauli acting on `qubit`.
    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Self {
        assert!(qubit < n);
        let bit = 1u32 << qubit;
        match kind {
            PauliKind::X => Self { n: n as u8, x: bit, z: 0, phase: 0 },
            PauliKind::Z => Self { n: n as u8, x: 0, z: bit, phase: 0 },
            // Y = i * XZ
            PauliKind::Y => Self { n: n as u8, x: bit, z: bit, phase: 1 },
        }
    }

    /// Hermitian Pauli with the given support and positive sign.
    pub fn positive(n: usize, x: u32, z: u32) -> Self {
        let overlap = (x & z).count_ones() as u8;
        Self { n: n as u8, x, z, phase: overlap % 4 }
    }

    pub fn from_parts(n: usize, x: u32, z: u32, phase: u8) -> Self {
        Self { n: n as u8, x, z, phase: phase % 4 }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u32 {
        self.x
    }

    pub fn z_bits(&self) -> u32 {
        self.z
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, qubit: usize) -> bool {
        self.x >> qubit & 1 == 1
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        self.z >> qubit & 1 == 1
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity_support(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Product `self * other` with exact phase tracking.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, other.n, "pauli product dimension mismatch");
        // Z^b X^c = (-1)^{|b&c|} X^c Z^b picks up the crossing sign.
        let crossings = (self.z & other.x).count_ones() as u8;
        PauliOperator {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (crossings % 2)) % 4,
        }
    }

    /// True when the operator equals its own adjoint.
    pub fn is_hermitian(&self) -> bool {
        let overlap = (self.x & self.z).count_ones() as u8;
        (self.phase % 2) == (overlap % 2)
    }

    /// Sign bit of a Hermitian Pauli relative to its positive form.
    pub fn sign_bit(&self) -> bool {
        debug_assert!(self.is_hermitian());
        let positive = (self.x & self.z).count_ones() as u8 % 4;
        (self.phase + 4 - positive) % 4 == 2
    }

    pub fn negate(&self) -> PauliOperator {
        PauliOperator { phase: (self.phase + 2) % 4, ..*self }
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        let sym = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        sym % 2 == 0
    }

    /// Index bit position of `qubit` in a 2^n-dimensional register.
    #[inline]
    fn index_bit(&self, qubit: usize) -> usize {
        self.n as usize - 1 - qubit
    }

    fn index_masks(&self) -> (usize, usize) {
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in 0..self.n as usize {
            if self.x_bit(q) {
                xm |= 1 << self.index_bit(q);
            }
            if self.z_bit(q) {
                zm |= 1 << self.index_bit(q);
            }
        }
        (xm, zm)
    }

    fn phase_factor(&self) -> C64 {
        match self.phase {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => -ONE,
            _ => C64::new(0.0, -1.0),
        }
    }

    /// Apply to a dense state vector: `P|b> = i^phase (-1)^{|z&b|} |b^x>`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let dim = 1usize << self.n;
        assert_eq!(v.len(), dim);
        let (xm, zm) = self.index_masks();
        let f = self.phase_factor();
        let mut out = vec![ZERO; dim];
        for (b, amp) in v.iter().enumerate() {
            if *amp == ZERO {
                continue;
            }
            let sign = if ((zm & b).count_ones()) % 2 == 1 { -ONE } else { ONE };
            out[b ^ xm] += f * sign * amp;
        }
        out
    }

    /// Dense matrix representation.
    pub fn matrix(&self) -> CMat {
        let dim = 1usize << self.n;
        let (xm, zm) = self.index_masks();
        let f = self.phase_factor();
        let mut m = CMat::zeros(dim, dim);
        for b in 0..dim {
            let sign = if ((zm & b).count_ones()) % 2 == 1 { -ONE } else { ONE };
            m[(b ^ xm, b)] = f * sign;
        }
        m
    }

    /// Whether the dense matrix is symmetric (even Y count) or antisymmetric.
    pub fn is_symmetric(&self) -> bool {
        (self.x & self.z).count_ones() % 2 == 0
    }
}

impl core::fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let lead = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{lead}")?;
        for q in 0..self.n as usize {
            let c = match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                // Displayed as the XZ word, not Y, to keep phases literal.
                (true, true) => 'W',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::I;

    fn x1() -> PauliOperator {
        PauliOperator::single(1, 0, PauliKind::X)
    }
    fn y1() -> PauliOperator {
        PauliOperator::single(1, 0, PauliKind::Y)
    }
    fn z1() -> PauliOperator {
        PauliOperator::single(1, 0, PauliKind::Z)
    }

    #[test]
    fn single_qubit_matrices() {
        let x = x1().matrix();
        assert_eq!(x[(0, 1)], ONE);
        assert_eq!(x[(1, 0)], ONE);
        let y = y1().matrix();
        assert_eq!(y[(0, 1)], -I);
        assert_eq!(y[(1, 0)], I);
        let z = z1().matrix();
        assert_eq!(z[(0, 0)], ONE);
        assert_eq!(z[(1, 1)], -ONE);
    }

    #[test]
    fn products_close() {
        // XY = iZ, YX = -iZ, XZ = -iY, products stay in the 4-phase set.
        let xy = x1().mul(&y1());
        assert_eq!(xy.matrix().max_abs_diff(&z1().matrix().scale(I)), 0.0);
        let yx = y1().mul(&x1());
        assert_eq!(yx.matrix().max_abs_diff(&z1().matrix().scale(-I)), 0.0);
        let xx = x1().mul(&x1());
        assert!(xx.is_identity_support());
        assert_eq!(xx.phase_exponent(), 0);
    }

    #[test]
    fn product_matches_dense_matrix_product() {
        let n = 3;
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            seed >> 33
        };
        for _ in 0..200 {
            let a = PauliOperator::from_parts(
                n,
                (next() % 8) as u32,
                (next() % 8) as u32,
                (next() % 4) as u8,
            );
            let b = PauliOperator::from_parts(
                n,
                (next() % 8) as u32,
                (next() % 8) as u32,
                (next() % 4) as u8,
            );
            let direct = a.matrix().mul(&b.matrix());
            assert_eq!(a.mul(&b).matrix().max_abs_diff(&direct), 0.0);
        }
    }

    #[test]
    fn hermiticity_and_sign() {
        assert!(y1().is_hermitian());
        assert!(!y1().sign_bit());
        assert!(y1().negate().sign_bit());
        // XZ has phase 0 but x&z overlap 1: anti-Hermitian.
        let xz = PauliOperator::from_parts(1, 1, 1, 0);
        assert!(!xz.is_hermitian());
    }

    #[test]
    fn commutation() {
        assert!(!x1().commutes_with(&z1()));
        let xi = PauliOperator::single(2, 0, PauliKind::X);
        let iz = PauliOperator::single(2, 1, PauliKind::Z);
        assert!(xi.commutes_with(&iz));
        let xx = PauliOperator::positive(2, 0b11, 0);
        let zz = PauliOperator::positive(2, 0, 0b11);
        assert!(xx.commutes_with(&zz));
    }

    #[test]
    fn apply_matches_matrix() {
        let p = PauliOperator::positive(2, 0b01, 0b10);
        let v = vec![ONE, I, -ONE, C64::new(0.5, -0.5)];
        let via_matrix = p.matrix().mat_vec(&v);
        assert_eq!(p.apply(&v), via_matrix);
    }

    #[test]
    fn qubit_zero_is_leftmost_factor() {
        // X on qubit 0 of two qubits must be X (x) I: flips the high index bit.
        let p = PauliOperator::single(2, 0, PauliKind::X);
        let m = p.matrix();
        assert_eq!(m[(2, 0)], ONE);
        assert_eq!(m[(3, 1)], ONE);
        assert_eq!(m[(0, 2)], ONE);
    }
}
