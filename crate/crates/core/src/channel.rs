//! CPTP channels in Kraus form, their superoperators, and average fidelity.

use crate::cmat::{C64, CMat, ZERO};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct NoiseChannel {
    n_qubits: usize,
    kraus: Vec<CMat>,
}

impl NoiseChannel {
    /// Build from Kraus operators, checking trace preservation.
    pub fn from_kraus(n_qubits: usize, kraus: Vec<CMat>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut sum = CMat::zeros(dim, dim);
        for k in kraus.iter() {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch { left: k.rows(), right: dim });
            }
            sum = sum.add(&k.dagger().mul(k));
        }
        let dev = sum.max_abs_diff(&CMat::identity(dim));
        if dev > 1e-10 {
            return Err(Error::NotTracePreserving {
                deviation_milli: libm::fmin(dev * 1e3, u32::MAX as f64) as u32,
            });
        }
        Ok(Self { n_qubits, kraus })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, kraus: vec![CMat::identity(1 << n_qubits)] }
    }

    pub fn from_unitary(u: CMat) -> Result<Self> {
        let dim = u.rows();
        assert!(dim.is_power_of_two());
        let n = dim.trailing_zeros() as usize;
        if !u.is_unitary(1e-10) {
            return Err(Error::InvalidParameter(alloc::string::String::from(
                "matrix is not unitary",
            )));
        }
        Ok(Self { n_qubits: n, kraus: vec![u] })
    }

    /// Global depolarizing channel on `n_qubits`:
    /// `rho -> (1-p) rho + p I/d`, as the uniform Pauli mixture.
    pub fn depolarizing(n_qubits: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        let dim = 1usize << n_qubits;
        let d2 = (dim * dim) as f64;
        let mut kraus = Vec::with_capacity(dim * dim);
        let keep = libm::sqrt(1.0 - p + p / d2);
        kraus.push(CMat::identity(dim).scale(C64::new(keep, 0.0)));
        let spread = libm::sqrt(p / d2);
        for x in 0..dim as u32 {
            for z in 0..dim as u32 {
                if x == 0 && z == 0 {
                    continue;
                }
                let pmat = PauliOperator::positive(n_qubits, x, z).matrix();
                kraus.push(pmat.scale(C64::new(spread, 0.0)));
            }
        }
        Self::from_kraus(n_qubits, kraus)
    }

    /// Single-qubit bit flip: X with probability p.
    pub fn bit_flip(p: f64) -> Result<Self> {
        check_probability(p)?;
        let x = PauliOperator::positive(1, 1, 0).matrix();
        Self::from_kraus(
            1,
            vec![
                CMat::identity(2).scale(C64::new(libm::sqrt(1.0 - p), 0.0)),
                x.scale(C64::new(libm::sqrt(p), 0.0)),
            ],
        )
    }

    /// Single-qubit phase flip: Z with probability p.
    pub fn phase_flip(p: f64) -> Result<Self> {
        check_probability(p)?;
        let z = PauliOperator::positive(1, 0, 1).matrix();
        Self::from_kraus(
            1,
            vec![
                CMat::identity(2).scale(C64::new(libm::sqrt(1.0 - p), 0.0)),
                z.scale(C64::new(libm::sqrt(p), 0.0)),
            ],
        )
    }

    /// Coherent ZZ rotation exp(i theta Z (x) Z) on a qubit pair: the
    /// correlated-crosstalk primitive. A unitary channel.
    pub fn zz_rotation(theta: f64) -> Self {
        let mut diag = [ZERO; 4];
        for (b, d) in diag.iter_mut().enumerate() {
            // (-1)^(b1 xor b2) is the Z(x)Z eigenvalue of |b1 b2>.
            let sign = if (b & 1) ^ (b >> 1 & 1) == 1 { -1.0 } else { 1.0 };
            *d = C64::from_polar(1.0, theta * sign);
        }
        Self { n_qubits: 2, kraus: vec![CMat::from_diag(&diag)] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn kraus_operators(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn is_unitary_channel(&self, tol: f64) -> bool {
        self.kraus.len() == 1 && self.kraus[0].is_unitary(tol)
    }

    /// Apply to a density matrix of matching dimension.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(rho.rows(), rho.cols());
        for k in self.kraus.iter() {
            out = out.add(&rho.conjugate_with(k));
        }
        out
    }

    /// Natural-representation superoperator (column-stacking convention):
    /// `vec(E(rho)) = S vec(rho)`, `S = sum_k conj(K_k) (x) K_k`.
    pub fn superoperator(&self) -> CMat {
        let d2 = self.dim() * self.dim();
        let mut s = CMat::zeros(d2, d2);
        for k in self.kraus.iter() {
            s = s.add(&k.conj().kron(k));
        }
        s
    }

    /// Haar-average fidelity `F = (d F_e + 1)/(d + 1)` with the entanglement
    /// fidelity `F_e = sum_k |Tr K_k|^2 / d^2`.
    pub fn average_fidelity(&self) -> f64 {
        let d = self.dim() as f64;
        let fe: f64 = self.kraus.iter().map(|k| k.trace().norm_sqr()).sum::<f64>() / (d * d);
        (d * fe + 1.0) / (d + 1.0)
    }

    /// Lift onto `n` qubits acting on the given target wires.
    pub fn embed(&self, n: usize, targets: &[usize]) -> Result<NoiseChannel> {
        if targets.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { left: targets.len(), right: self.n_qubits });
        }
        for &t in targets {
            if t >= n {
                return Err(Error::QubitOutOfRange { qubit: t, n });
            }
        }
        let dim = 1usize << n;
        let small = self.dim();
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                let mut big = CMat::zeros(dim, dim);
                for row in 0..dim {
                    // Bits of the embedded register on the target wires.
                    let sub_row = extract_bits(row, n, targets);
                    for sub_col in 0..small {
                        let v = k[(sub_row, sub_col)];
                        if v == ZERO {
                            continue;
                        }
                        let col = replace_bits(row, n, targets, sub_col);
                        big[(row, col)] = v;
                    }
                }
                big
            })
            .collect();
        NoiseChannel::from_kraus(n, kraus)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(alloc::format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Read the bits of `index` (qubit 0 = most significant) on `wires`,
/// packed as a small index in wire order.
fn extract_bits(index: usize, n: usize, wires: &[usize]) -> usize {
    let mut out = 0usize;
    for (pos, &w) in wires.iter().enumerate() {
        let bit = index >> (n - 1 - w) & 1;
        out |= bit << (wires.len() - 1 - pos);
    }
    out
}

/// Replace the bits of `index` on `wires` by those of `sub`.
fn replace_bits(index: usize, n: usize, wires: &[usize], sub: usize) -> usize {
    let mut out = index;
    for (pos, &w) in wires.iter().enumerate() {
        let bit = sub >> (wires.len() - 1 - pos) & 1;
        let mask = 1usize << (n - 1 - w);
        if bit == 1 {
            out |= mask;
        } else {
            out &= !mask;
        }
    }
    out
}

/// Average fidelity from a natural-representation superoperator:
/// `F_e = Tr S / d^2`.
pub fn average_fidelity_superop(s: &CMat, dim: usize) -> f64 {
    let d = dim as f64;
    let fe = s.trace().re / (d * d);
    (d * fe + 1.0) / (d + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_channel_fidelity() {
        let ch = NoiseChannel::identity(2);
        assert!((ch.average_fidelity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn depolarizing_fidelity_closed_form() {
        // F = 1 - p (1 - 1/d); for two qubits 1 - 0.75 p.
        for &p in &[0.01, 0.05, 0.3, 1.0] {
            let ch = NoiseChannel::depolarizing(2, p).unwrap();
            assert!((ch.average_fidelity() - (1.0 - 0.75 * p)).abs() < 1e-12);
        }
        // Completely depolarizing on two qubits: F = 1/d = 0.25.
        let ch = NoiseChannel::depolarizing(2, 1.0).unwrap();
        assert!((ch.average_fidelity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_action() {
        let ch = NoiseChannel::depolarizing(1, 0.1).unwrap();
        let mut rho = CMat::zeros(2, 2);
        rho[(1, 1)] = ONE;
        let out = ch.apply(&rho);
        assert!((out[(0, 0)].re - 0.05).abs() < 1e-12);
        assert!((out[(1, 1)].re - 0.95).abs() < 1e-12);
    }

    #[test]
    fn zz_rotation_limits() {
        let id = NoiseChannel::zz_rotation(0.0);
        assert!(id.kraus_operators()[0].max_abs_diff(&CMat::identity(4)) < 1e-15);
        // theta = pi/2 gives Z(x)Z up to global phase.
        let ch = NoiseChannel::zz_rotation(core::f64::consts::FRAC_PI_2);
        let zz = PauliOperator::positive(2, 0, 0b11).matrix();
        assert!(ch.kraus_operators()[0].approx_eq_up_to_phase(&zz, 1e-12));
        assert!(ch.is_unitary_channel(1e-12));
    }

    #[test]
    fn zz_rotation_fidelity_closed_form() {
        // F = (4 cos^2 theta + 1)/5 on two qubits.
        for &theta in &[0.0, 0.1, 0.4, 1.2] {
            let ch = NoiseChannel::zz_rotation(theta);
            let want = (4.0 * libm::cos(theta) * libm::cos(theta) + 1.0) / 5.0;
            assert!((ch.average_fidelity() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn superoperator_trace_matches_entanglement_fidelity() {
        let ch = NoiseChannel::depolarizing(2, 0.2).unwrap();
        let via_superop = average_fidelity_superop(&ch.superoperator(), 4);
        assert!((via_superop - ch.average_fidelity()).abs() < 1e-12);
    }

    #[test]
    fn embed_single_qubit_channel() {
        let flip = NoiseChannel::bit_flip(1.0).unwrap();
        let embedded = flip.embed(3, &[1]).unwrap();
        let mut rho = CMat::zeros(8, 8);
        rho[(0, 0)] = ONE;
        let out = embedded.apply(&rho);
        // |000> -> |010>
        assert!((out[(2, 2)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embed_pair_channel_on_outer_wires() {
        let zz = NoiseChannel::zz_rotation(0.3);
        let embedded = zz.embed(3, &[0, 2]).unwrap();
        assert!(embedded.is_unitary_channel(1e-12));
        // Diagonal phases depend only on bits 0 and 2.
        let k = &embedded.kraus_operators()[0];
        for b in 0..8usize {
            let s = if (b >> 2 & 1) ^ (b & 1) == 1 { -1.0 } else { 1.0 };
            let want = C64::from_polar(1.0, 0.3 * s);
            assert!((k[(b, b)] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let bad = vec![CMat::identity(2).scale(C64::new(0.9, 0.0))];
        assert!(matches!(
            NoiseChannel::from_kraus(1, bad),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn haar_average_monte_carlo_oracle() {
        // Cross-check the closed form against the defining Haar integral,
        // sampled over random pure states.
        let ch = NoiseChannel::depolarizing(2, 0.37).unwrap();
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut gauss = || {
            // Box-Muller on a xorshift stream; test-only quality.
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            let u1 = ((seed >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            let u2 = (seed >> 11) as f64 / (1u64 << 53) as f64;
            (-2.0f64 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
        };
        let mut acc = 0.0;
        let samples = 20_000;
        for _ in 0..samples {
            let mut v: Vec<C64> = (0..4).map(|_| C64::new(gauss(), gauss())).collect();
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in v.iter_mut() {
                *a /= C64::new(norm, 0.0);
            }
            let mut rho = CMat::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    rho[(i, j)] = v[i] * v[j].conj();
                }
            }
            let out = ch.apply(&rho);
            // <psi| E(|psi><psi|) |psi>
            let mut fid = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    fid += v[i].conj() * out[(i, j)] * v[j];
                }
            }
            acc += fid.re;
        }
        let mc = acc / samples as f64;
        assert!((mc - ch.average_fidelity()).abs() < 1e-2, "mc = {mc}");
    }
}
