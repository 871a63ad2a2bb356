//! Exact group twirl of a channel and its decay eigenvalues.
//!
//! Averaging `g^dag . E . g` over an orthogonal 2-design projects the
//! channel onto the commutant of the orthogonal group action, which on two
//! qubits splits the 16-dimensional operator space as 1 (trace) + 9
//! (symmetric traceless) + 6 (antisymmetric). The two nontrivial sector
//! eigenvalues `b` and `c` are exactly the decay bases of the benchmarking
//! model, and the average fidelity is `F = (9b + 6c + 5)/20`.
//!
//! These routines are the independent oracle the simulated pipeline is
//! checked against: they never touch sampling, circuits, or fitting.

use crate::channel::NoiseChannel;
use crate::cmat::{CMat, inner, vectorize};
use crate::error::{Error, Result};
use crate::group::GroupCatalog;
use crate::pauli::PauliOperator;
use alloc::vec::Vec;

/// Frame-potential certificate threshold for an orthogonal 2-design.
const DESIGN_TOLERANCE: f64 = 1e-9;

/// Exact twirled superoperator `(1/|G|) sum_g S(g)^dag S(E) S(g)` in the
/// natural (column-stacking) representation.
pub fn twirl_superoperator(catalog: &GroupCatalog, channel: &NoiseChannel) -> Result<CMat> {
    if channel.n_qubits() != catalog.n() {
        return Err(Error::DimensionMismatch { left: channel.n_qubits(), right: catalog.n() });
    }
    let s_channel = channel.superoperator();
    let d2 = s_channel.rows();
    let mut acc = CMat::zeros(d2, d2);
    for id in 0..catalog.order() as u32 {
        let u = catalog.element(id).to_unitary()?;
        let s_u = u.conj().kron(&u);
        // S(g^-1) E S(g) = S(g)^dag S(E) S(g) for unitary g.
        let term = s_u.dagger().mul(&s_channel).mul(&s_u);
        acc = acc.add(&term);
    }
    Ok(acc.scale(crate::cmat::C64::new(1.0 / catalog.order() as f64, 0.0)))
}

/// Decay parameters of the twirled channel.
#[derive(Clone, Copy, Debug)]
pub struct TwirlDecay {
    /// Symmetric-sector eigenvalue (multiplicity 9 on two qubits).
    pub b: f64,
    /// Antisymmetric-sector eigenvalue (multiplicity 6 on two qubits).
    pub c: f64,
    /// Largest off-structure residual seen while projecting; a diagnostic
    /// that the commutant block structure really held.
    pub residual: f64,
}

/// Group-average the channel and read off the `(b, c)` decay pair using the
/// known 1 + 9 + 6 block structure (no generic eigendecomposition).
///
/// Fails unless the catalog certifies as an orthogonal 2-design
/// (frame potential 3).
pub fn twirl_decay_params(catalog: &GroupCatalog, channel: &NoiseChannel) -> Result<TwirlDecay> {
    let fp = catalog.frame_potential()?;
    if (fp - 3.0).abs() > DESIGN_TOLERANCE {
        return Err(Error::NotTwoDesign {
            frame_potential_milli: libm::fmin(fp * 1e3, u32::MAX as f64) as u32,
        });
    }
    let s = twirl_superoperator(catalog, channel)?;
    decay_params_from_superop(&s, catalog.n())
}

/// Sector averages `Tr[P E(P)]/d` over normalized symmetric (minus identity)
/// and antisymmetric Pauli bases.
pub fn decay_params_from_superop(s: &CMat, n: usize) -> Result<TwirlDecay> {
    let dim = 1usize << n;
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for x in 0..dim as u32 {
        for z in 0..dim as u32 {
            if x == 0 && z == 0 {
                continue;
            }
            let p = PauliOperator::positive(n, x, z);
            if p.is_symmetric() {
                sym.push(p);
            } else {
                anti.push(p);
            }
        }
    }
    let d = dim as f64;
    let mut residual = 0.0f64;
    let mut sector_mean = |paulis: &[PauliOperator]| -> f64 {
        let mut acc = 0.0;
        for p in paulis {
            let v = vectorize(&p.matrix());
            let image = s.mat_vec(&v);
            let diag = inner(&v, &image) / crate::cmat::C64::new(d, 0.0);
            residual = libm::fmax(residual, diag.im.abs());
            acc += diag.re;
        }
        acc / paulis.len() as f64
    };
    let b = sector_mean(&sym);
    let c = sector_mean(&anti);
    // Trace sector must stay exactly 1 for a trace-preserving channel.
    let id_vec = vectorize(&CMat::identity(dim));
    let trace_sector = inner(&id_vec, &s.mat_vec(&id_vec)).re / d;
    residual = libm::fmax(residual, (trace_sector - 1.0).abs());
    Ok(TwirlDecay { b, c, residual })
}

/// Two-qubit average fidelity from the twirl decay pair:
/// `F = (9b + 6c + 5)/20`.
pub fn fidelity_from_decay(b: f64, c: f64) -> f64 {
    (9.0 * b + 6.0 * c + 5.0) / 20.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::average_fidelity_superop;
    use crate::gates;
    use crate::group::GroupCatalog;

    fn realizable() -> GroupCatalog {
        GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap()
    }

    #[test]
    fn identity_channel_decays_trivially() {
        let catalog = realizable();
        let decay = twirl_decay_params(&catalog, &NoiseChannel::identity(2)).unwrap();
        assert!((decay.b - 1.0).abs() < 1e-10);
        assert!((decay.c - 1.0).abs() < 1e-10);
        assert!((fidelity_from_decay(decay.b, decay.c) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn depolarizing_decay_parameters() {
        let catalog = realizable();
        for &p in &[0.01, 0.05, 0.3] {
            let ch = NoiseChannel::depolarizing(2, p).unwrap();
            let decay = twirl_decay_params(&catalog, &ch).unwrap();
            assert!((decay.b - (1.0 - p)).abs() < 1e-10, "b = {}", decay.b);
            assert!((decay.c - (1.0 - p)).abs() < 1e-10, "c = {}", decay.c);
            let f = fidelity_from_decay(decay.b, decay.c);
            assert!((f - ch.average_fidelity()).abs() < 1e-10);
        }
    }

    #[test]
    fn generic_channel_consistency() {
        // For arbitrary CPTP input, F computed from (b, c) must equal the
        // average fidelity of the twirled channel, and twirling preserves
        // average fidelity.
        let catalog = realizable();
        let u = catalog.element(123).to_unitary().unwrap();
        let mut kraus: Vec<CMat> = NoiseChannel::depolarizing(2, 0.1)
            .unwrap()
            .kraus_operators()
            .iter()
            .map(|k| k.mul(&u))
            .collect();
        // Mix in a coherent ZZ over-rotation.
        let zz = NoiseChannel::zz_rotation(0.17);
        kraus = kraus.iter().map(|k| zz.kraus_operators()[0].mul(k)).collect();
        let channel = NoiseChannel::from_kraus(2, kraus).unwrap();

        let s_twirled = twirl_superoperator(&catalog, &channel).unwrap();
        let decay = decay_params_from_superop(&s_twirled, 2).unwrap();
        assert!(decay.residual < 1e-10, "residual = {}", decay.residual);
        let f_structure = fidelity_from_decay(decay.b, decay.c);
        let f_twirled = average_fidelity_superop(&s_twirled, 4);
        assert!((f_structure - f_twirled).abs() < 1e-9);
        assert!((f_twirled - channel.average_fidelity()).abs() < 1e-9);
    }

    #[test]
    fn phase_flip_separates_sectors() {
        // Z flip with probability p on one qubit: of the 8 Paulis
        // anticommuting with ZI, four are symmetric and four antisymmetric,
        // giving b = 1 - 8p/9 and c = 1 - 4p/3 exactly.
        let catalog = realizable();
        let p = 0.12;
        let ch = NoiseChannel::phase_flip(p).unwrap().embed(2, &[0]).unwrap();
        let decay = twirl_decay_params(&catalog, &ch).unwrap();
        assert!((decay.b - (1.0 - 8.0 * p / 9.0)).abs() < 1e-10, "b = {}", decay.b);
        assert!((decay.c - (1.0 - 4.0 * p / 3.0)).abs() < 1e-10, "c = {}", decay.c);
        assert!((decay.b - decay.c).abs() > 1e-3);
        let f = fidelity_from_decay(decay.b, decay.c);
        assert!((f - ch.average_fidelity()).abs() < 1e-9);
    }

    #[test]
    fn non_design_rejected() {
        let paulis = GroupCatalog::generate(gates::single_qubit_paulis(), 16).unwrap();
        let ch = NoiseChannel::identity(1);
        assert!(matches!(
            twirl_decay_params(&paulis, &ch),
            Err(Error::NotTwoDesign { .. })
        ));
    }
}
