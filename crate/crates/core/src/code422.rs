//! The [4,2,2] error-detecting code: stabilizers XXXX and ZZZZ, two logical
//! qubits, distance 2.
//!
//! Code wires are indexed 0..3 (wire 0 is the leftmost tensor factor); the
//! fault-tolerant preparation ancilla is wire 4. The logical readout is
//! `Z_L1 = Z0 Z1`, `Z_L2 = Z0 Z2`, and odd total parity heralds a detected
//! error.
//!
//! Two of the logical gates are *virtual*: they cost no physical gates and
//! are tracked as a relabeling of the four code wires. Every physical gate
//! prescribed by the encoding table is routed through the current relabel
//! frame, and measurement decoding undoes the frame before extracting the
//! logical bits.

use crate::circuit::{Circuit, Gate};
use crate::clifford::CliffordElement;
use crate::cmat::{C64, CMat, ONE, ZERO};
use crate::error::{Error, Result};
use crate::gates;
use crate::pauli::PauliOperator;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub const CODE_QUBITS: usize = 4;
pub const ANCILLA_WIRE: usize = 4;

/// Stabilizer generators XXXX and ZZZZ.
pub fn stabilizer_generators() -> [PauliOperator; 2] {
    [
        PauliOperator::positive(CODE_QUBITS, 0b1111, 0),
        PauliOperator::positive(CODE_QUBITS, 0, 0b1111),
    ]
}

/// The four logical basis codewords, indexed by (bit1, bit2) with bit1 the
/// high bit: |b1 b2> = X_L1^b1 X_L2^b2 (|0000> + |1111>)/sqrt(2).
pub fn logical_basis_states() -> [Vec<C64>; 4] {
    let amp = C64::new(1.0 / libm::sqrt(2.0), 0.0);
    let mut states: [Vec<C64>; 4] = core::array::from_fn(|_| vec![ZERO; 16]);
    // Basis index bit order is (q1 q2 q3 q4).
    let pairs = [
        (0b0000usize, 0b1111usize), // |00>: 0000 + 1111
        (0b1100, 0b0011),           // |01>: X on wires 0,1
        (0b1010, 0b0101),           // |10>: X on wires 0,2
        (0b0110, 0b1001),           // |11>: X on wires 1,2
    ];
    for (logical, (a, b)) in pairs.iter().enumerate() {
        states[logical][*a] = amp;
        states[logical][*b] = amp;
    }
    states
}

/// 16x4 isometry whose columns are the logical basis codewords.
pub fn code_isometry() -> CMat {
    let states = logical_basis_states();
    let mut v = CMat::zeros(16, 4);
    for (col, state) in states.iter().enumerate() {
        for (row, a) in state.iter().enumerate() {
            v[(row, col)] = *a;
        }
    }
    v
}

/// Restrict a 16x16 unitary to the code space, failing if it leaks.
pub fn restrict_to_code_space(u: &CMat, tol: f64) -> Result<CMat> {
    let v = code_isometry();
    let uv = u.mul(&v);
    let restricted = v.dagger().mul(&uv);
    // Leakage: (I - V V^dag) U V must vanish.
    let reprojected = v.mul(&restricted);
    let leak = uv.max_abs_diff(&reprojected);
    if leak > tol {
        return Err(Error::InvalidParameter(alloc::format!(
            "operator leaves the code space (leakage {leak:.3e})"
        )));
    }
    Ok(restricted)
}

/// Physical realization of one logical gate: a transversal gate list on
/// code wires, or a pure relabeling of two code wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhysicalAction {
    Gates(Vec<Gate>),
    VirtualSwap(usize, usize),
}

impl PhysicalAction {
    /// Dense 16x16 unitary (virtual swaps as explicit SWAP matrices).
    pub fn unitary(&self) -> Result<CMat> {
        match self {
            PhysicalAction::Gates(gs) => {
                let mut c = Circuit::new(CODE_QUBITS);
                c.extend_gates(gs);
                c.unitary()
            }
            PhysicalAction::VirtualSwap(a, b) => {
                let mut c = Circuit::new(CODE_QUBITS);
                c.push(Gate::Cnot { control: *a as u8, target: *b as u8 });
                c.push(Gate::Cnot { control: *b as u8, target: *a as u8 });
                c.push(Gate::Cnot { control: *a as u8, target: *b as u8 });
                c.unitary()
            }
        }
    }

    pub fn physical_gate_count(&self) -> usize {
        match self {
            PhysicalAction::Gates(gs) => gs.len(),
            PhysicalAction::VirtualSwap(..) => 0,
        }
    }
}

/// Physical realization of the logical generator with the given index in
/// [`gates::code_gate_set`] order.
pub fn generator_realization(gen_id: usize) -> PhysicalAction {
    match gen_id {
        0 => PhysicalAction::Gates(vec![Gate::X(0), Gate::X(2)]),
        1 => PhysicalAction::Gates(vec![Gate::X(0), Gate::X(1)]),
        2 => PhysicalAction::Gates(vec![Gate::Z(0), Gate::Z(1)]),
        3 => PhysicalAction::Gates(vec![Gate::Z(0), Gate::Z(2)]),
        4 => PhysicalAction::Gates(vec![Gate::H(0), Gate::H(1), Gate::H(2), Gate::H(3)]),
        5 => PhysicalAction::Gates(vec![Gate::S(0), Gate::S(1), Gate::S(2), Gate::S(3)]),
        6 => PhysicalAction::VirtualSwap(0, 1),
        7 => PhysicalAction::VirtualSwap(0, 2),
        _ => panic!("code gate set has 8 generators"),
    }
}

/// One row of the encoding table.
#[derive(Clone, Debug)]
pub struct GateTableRow {
    pub name: String,
    /// All physical gates listed for this row (the identity row has two).
    pub physical: Vec<PhysicalAction>,
    pub logical: CliffordElement,
}

/// The full encoding table: physical four-qubit gates and their logical
/// two-qubit equivalents.
pub fn gate_table() -> Vec<GateTableRow> {
    let set = gates::code_gate_set();
    let row = |name: &str, physical: Vec<PhysicalAction>, logical: CliffordElement| GateTableRow {
        name: String::from(name),
        physical,
        logical,
    };
    vec![
        row(
            "X4,Z4 -> II",
            vec![
                PhysicalAction::Gates(vec![Gate::X(0), Gate::X(1), Gate::X(2), Gate::X(3)]),
                PhysicalAction::Gates(vec![Gate::Z(0), Gate::Z(1), Gate::Z(2), Gate::Z(3)]),
            ],
            CliffordElement::identity(2),
        ),
        row("XIXI -> XI", vec![generator_realization(0)], set[0].element.clone()),
        row("XXII -> IX", vec![generator_realization(1)], set[1].element.clone()),
        row("ZZII -> ZI", vec![generator_realization(2)], set[2].element.clone()),
        row("ZIZI -> IZ", vec![generator_realization(3)], set[3].element.clone()),
        row("H4 -> SWAP.HH", vec![generator_realization(4)], set[4].element.clone()),
        row("P4 -> ZZ.CZ", vec![generator_realization(5)], set[5].element.clone()),
        row("SWAP12 -> CNOT12", vec![generator_realization(6)], set[6].element.clone()),
        row("SWAP13 -> CNOT21", vec![generator_realization(7)], set[7].element.clone()),
    ]
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
    pub tolerance: f64,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

/// Deviation between a physical action restricted to the code space and a
/// logical unitary, up to global phase. Code-space leakage counts as full
/// deviation.
pub fn action_deviation(action: &PhysicalAction, logical: &CliffordElement) -> f64 {
    let tol = 1e-10;
    let phys = match action.unitary() {
        Ok(u) => u,
        Err(_) => return f64::INFINITY,
    };
    let restricted = match restrict_to_code_space(&phys, tol) {
        Ok(r) => r,
        Err(_) => return f64::INFINITY,
    };
    let want = logical.to_unitary().expect("two-qubit dense realization");
    // Align global phase on the largest entry, then take the max deviation.
    let mut best = (0usize, 0usize);
    let mut best_norm = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if want[(i, j)].norm() > best_norm {
                best_norm = want[(i, j)].norm();
                best = (i, j);
            }
        }
    }
    let target = restricted[best];
    if target.norm() < 1e-14 {
        return f64::INFINITY;
    }
    let phase = target / want[best];
    want.scale(phase).max_abs_diff(&restricted)
}

/// Verify all nine table rows at tolerance 1e-10.
pub fn verify_gate_table() -> TableReport {
    let tolerance = 1e-10;
    let rows = gate_table()
        .iter()
        .map(|row| {
            let max_deviation = row
                .physical
                .iter()
                .map(|a| action_deviation(a, &row.logical))
                .fold(0.0, f64::max);
            RowReport {
                name: row.name.clone(),
                passed: max_deviation <= tolerance,
                max_deviation,
            }
        })
        .collect();
    TableReport { rows, tolerance }
}

/// Relabeling of the four code wires induced by virtual gates.
/// `physical_wire(i)` is the wire currently holding code wire `i`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RelabelFrame {
    map: [usize; 4],
}

impl Default for RelabelFrame {
    fn default() -> Self {
        Self::new()
    }
}

impl RelabelFrame {
    pub fn new() -> Self {
        Self { map: [0, 1, 2, 3] }
    }

    pub fn physical_wire(&self, code_wire: usize) -> usize {
        self.map[code_wire]
    }

    pub fn virtual_swap(&mut self, a: usize, b: usize) {
        self.map.swap(a, b);
    }

    pub fn as_array(&self) -> [usize; 4] {
        self.map
    }

    pub fn from_array(map: [usize; 4]) -> Self {
        debug_assert!({
            let mut seen = [false; 4];
            map.iter().for_each(|&w| seen[w] = true);
            seen.iter().all(|&s| s)
        });
        Self { map }
    }
}

/// Emits logical gates as physical circuits while tracking the relabel
/// frame. One instance per sequence; the underlying table is immutable.
#[derive(Clone, Debug)]
pub struct EncodingMap {
    frame: RelabelFrame,
}

impl Default for EncodingMap {
    fn default() -> Self {
        Self::new()
    }
}

impl EncodingMap {
    pub fn new() -> Self {
        Self { frame: RelabelFrame::new() }
    }

    pub fn frame(&self) -> RelabelFrame {
        self.frame
    }

    /// Emit one logical generator into `circuit`, mapping wires through the
    /// current frame. Virtual generators only update the frame.
    pub fn emit_generator(&mut self, circuit: &mut Circuit, gen_id: usize) {
        match generator_realization(gen_id) {
            PhysicalAction::Gates(gs) => {
                for g in gs {
                    circuit.push(self.map_gate(g));
                }
            }
            PhysicalAction::VirtualSwap(a, b) => self.frame.virtual_swap(a, b),
        }
    }

    /// Emit a whole generator word (applied left to right).
    pub fn emit_word(&mut self, circuit: &mut Circuit, word: &[u16]) {
        for gid in word {
            self.emit_generator(circuit, *gid as usize);
        }
    }

    /// Route a gate prescribed on code wires through the current frame.
    pub fn route_gate(&self, g: Gate) -> Gate {
        self.map_gate(g)
    }

    fn map_gate(&self, g: Gate) -> Gate {
        let m = |q: u8| self.frame.physical_wire(q as usize) as u8;
        match g {
            Gate::X(q) => Gate::X(m(q)),
            Gate::Y(q) => Gate::Y(m(q)),
            Gate::Z(q) => Gate::Z(m(q)),
            Gate::H(q) => Gate::H(m(q)),
            Gate::S(q) => Gate::S(m(q)),
            Gate::Sdg(q) => Gate::Sdg(m(q)),
            Gate::Cnot { control, target } => Gate::Cnot { control: m(control), target: m(target) },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrepMode {
    Plain,
    FaultTolerantAncilla,
}

#[derive(Clone, Debug)]
pub struct PreparationCircuit {
    pub mode: PrepMode,
    pub circuit: Circuit,
}

/// Circuit preparing the logical |00> codeword from |0...0>.
///
/// Plain mode is the four-gate circuit H(q2), CNOT q2->q1, CNOT q2->q3,
/// CNOT q3->q4. Fault-tolerant mode adds an ancilla coupled by CNOTs from
/// q1 and q4; the ancilla reads 1 when preparation failed.
pub fn prepare_logical_00(mode: PrepMode) -> PreparationCircuit {
    let n = match mode {
        PrepMode::Plain => CODE_QUBITS,
        PrepMode::FaultTolerantAncilla => CODE_QUBITS + 1,
    };
    let mut circuit = Circuit::new(n);
    circuit.push(Gate::H(1));
    circuit.push(Gate::Cnot { control: 1, target: 0 });
    circuit.push(Gate::Cnot { control: 1, target: 2 });
    circuit.push(Gate::Cnot { control: 2, target: 3 });
    if mode == PrepMode::FaultTolerantAncilla {
        circuit.push(Gate::Cnot { control: 0, target: ANCILLA_WIRE as u8 });
        circuit.push(Gate::Cnot { control: 3, target: ANCILLA_WIRE as u8 });
    }
    PreparationCircuit { mode, circuit }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Accepted([bool; 2]),
    Rejected,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ParityOutcome {
    pub raw_bits: [bool; 4],
    pub verdict: Verdict,
}

/// Decode a four-bit measurement record: odd parity is rejected, even
/// parity yields the logical bits (b1 xor b2, b1 xor b3) after undoing the
/// relabel frame.
pub fn decode_measurement(raw_bits: [bool; 4], frame: RelabelFrame) -> ParityOutcome {
    let parity = raw_bits.iter().filter(|&&b| b).count() % 2;
    if parity == 1 {
        return ParityOutcome { raw_bits, verdict: Verdict::Rejected };
    }
    let code_bit = |i: usize| raw_bits[frame.physical_wire(i)];
    let logical = [code_bit(0) ^ code_bit(1), code_bit(0) ^ code_bit(2)];
    ParityOutcome { raw_bits, verdict: Verdict::Accepted(logical) }
}

/// Benchmarking platform: encoded four-qubit or bare two-qubit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Platform {
    Logical422,
    Bare2q,
}

/// The state-rotation frame used by phased runs, and its exact inverse.
///
/// On the encoded platform this is transversal Hadamard followed by the
/// (non-fault-tolerant) phase gadget CNOT q2->q1, P(q1), CNOT q2->q1. On
/// bare qubits it is Hadamard-then-phase on each qubit.
pub fn phased_frame_circuit(platform: Platform) -> (Circuit, Circuit) {
    let pre = match platform {
        Platform::Logical422 => {
            let mut c = Circuit::new(CODE_QUBITS);
            c.push(Gate::H(0));
            c.push(Gate::H(1));
            c.push(Gate::H(2));
            c.push(Gate::H(3));
            c.push(Gate::Cnot { control: 1, target: 0 });
            c.push(Gate::S(0));
            c.push(Gate::Cnot { control: 1, target: 0 });
            c
        }
        Platform::Bare2q => {
            let mut c = Circuit::new(2);
            c.push(Gate::H(0));
            c.push(Gate::S(0));
            c.push(Gate::H(1));
            c.push(Gate::S(1));
            c
        }
    };
    let post = pre.inverse();
    (pre, post)
}

/// Decay-model constants (A, B, C) for a phased run, computed from the
/// frame's action on the logical space with both the state and the effect
/// conjugated by the frame (the inverse frame precedes measurement).
#[derive(Clone, Copy, Debug)]
pub struct FrameConstants {
    pub asymptote: f64,
    pub b_amplitude: f64,
    pub c_amplitude: f64,
}

pub fn phased_frame_constants(platform: Platform) -> Result<FrameConstants> {
    let (pre, _) = phased_frame_circuit(platform);
    let u_logical = match platform {
        Platform::Logical422 => restrict_to_code_space(&pre.unitary()?, 1e-10)?,
        Platform::Bare2q => pre.unitary()?,
    };
    let mut e0 = CMat::zeros(4, 4);
    e0[(0, 0)] = ONE;
    let rho = e0.conjugate_with(&u_logical);
    let effect = rho.clone();
    Ok(decay_constants(&effect, &rho))
}

/// A = Tr[E]/d, B = Tr[E rho_+] - A, C = Tr[E rho_-] with
/// rho_{+-} = (rho +- rho^T)/2.
pub fn decay_constants(effect: &CMat, rho: &CMat) -> FrameConstants {
    let d = rho.rows() as f64;
    let half = C64::new(0.5, 0.0);
    let rho_t = rho.transpose();
    let rho_plus = rho.add(&rho_t).scale(half);
    let rho_minus = rho.sub(&rho_t).scale(half);
    let asymptote = effect.trace().re / d;
    let b_amplitude = effect.mul(&rho_plus).trace().re - asymptote;
    let c_amplitude = effect.mul(&rho_minus).trace().re;
    FrameConstants { asymptote, b_amplitude, c_amplitude }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCatalog;

    fn zero_state(n: usize) -> Vec<C64> {
        let mut v = vec![ZERO; 1 << n];
        v[0] = ONE;
        v
    }

    #[test]
    fn plain_prep_reaches_codeword() {
        let prep = prepare_logical_00(PrepMode::Plain);
        assert_eq!(prep.circuit.gate_count(), 4);
        let u = prep.circuit.unitary().unwrap();
        let out = u.mat_vec(&zero_state(4));
        let want = &logical_basis_states()[0];
        let diff: f64 = out
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn ft_prep_leaves_ancilla_clear() {
        let prep = prepare_logical_00(PrepMode::FaultTolerantAncilla);
        assert_eq!(prep.circuit.gate_count(), 6);
        let u = prep.circuit.unitary().unwrap();
        let out = u.mat_vec(&zero_state(5));
        // Ancilla is the last index bit; all weight must sit on even indices.
        let odd_weight: f64 = out.iter().enumerate().filter(|(i, _)| i % 2 == 1).map(|(_, a)| a.norm_sqr()).sum();
        assert!(odd_weight < 1e-24);
        // Data part is the codeword.
        let want = &logical_basis_states()[0];
        for (i, amp) in want.iter().enumerate() {
            assert!((out[2 * i] - amp).norm() < 1e-12);
        }
    }

    #[test]
    fn decode_examples() {
        let frame = RelabelFrame::new();
        let o = decode_measurement([false; 4], frame);
        assert_eq!(o.verdict, Verdict::Accepted([false, false]));
        let o = decode_measurement([true, false, false, false], frame);
        assert_eq!(o.verdict, Verdict::Rejected);
        // 1100: logical (1^1, 1^0) = (0, 1)
        let o = decode_measurement([true, true, false, false], frame);
        assert_eq!(o.verdict, Verdict::Accepted([false, true]));
    }

    #[test]
    fn decode_undoes_relabel_frame() {
        let mut frame = RelabelFrame::new();
        frame.virtual_swap(0, 1);
        // Code wire 0 now lives on physical wire 1.
        let o = decode_measurement([true, false, true, false], frame);
        // Code bits: c0 = raw[1] = 0, c1 = raw[0] = 1, c2 = raw[2] = 1.
        assert_eq!(o.verdict, Verdict::Accepted([true, true]));
    }

    #[test]
    fn gate_table_verifies() {
        let report = verify_gate_table();
        assert_eq!(report.rows.len(), 9);
        for row in report.rows.iter() {
            assert!(row.passed, "{} deviates by {}", row.name, row.max_deviation);
        }
    }

    #[test]
    fn corrupted_row_fails() {
        // Claiming XIXI implements logical IX must be rejected.
        let set = gates::code_gate_set();
        let dev = action_deviation(&generator_realization(0), &set[1].element);
        assert!(dev > 1e-3);
    }

    #[test]
    fn emitted_circuits_preserve_stabilizer_group() {
        let catalog = GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap();
        let candidates: Vec<CMat> = [
            PauliOperator::positive(4, 0b1111, 0),
            PauliOperator::positive(4, 0, 0b1111),
            PauliOperator::positive(4, 0b1111, 0b1111),
        ]
        .iter()
        .map(|p| p.matrix())
        .collect();
        for id in (0..catalog.order() as u32).step_by(41) {
            let mut map = EncodingMap::new();
            let mut circuit = Circuit::new(CODE_QUBITS);
            map.emit_word(&mut circuit, catalog.word(id));
            let u = circuit.unitary().unwrap();
            for s in stabilizer_generators() {
                let conj = s.matrix().conjugate_with(&u);
                let hit = candidates.iter().any(|c| conj.max_abs_diff(c) < 1e-10);
                assert!(hit, "element {id} does not normalize the stabilizer group");
            }
        }
    }

    #[test]
    fn virtual_swap_equivalent_to_explicit_swap() {
        // A word with virtual gates, decoded through the frame, must act on
        // the codeword exactly like the same word with explicit swaps.
        let catalog = GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap();
        // Pick a word containing a virtual generator.
        let id = (0..catalog.order() as u32)
            .find(|&id| catalog.word(id).iter().any(|&g| g == 6 || g == 7))
            .unwrap();
        let word = catalog.word(id);

        let mut map = EncodingMap::new();
        let mut virt = Circuit::new(CODE_QUBITS);
        map.emit_word(&mut virt, word);
        let frame = map.frame();

        let mut explicit = Circuit::new(CODE_QUBITS);
        for gid in word {
            match generator_realization(*gid as usize) {
                PhysicalAction::Gates(gs) => explicit.extend_gates(&gs),
                PhysicalAction::VirtualSwap(a, b) => {
                    explicit.push(Gate::Cnot { control: a as u8, target: b as u8 });
                    explicit.push(Gate::Cnot { control: b as u8, target: a as u8 });
                    explicit.push(Gate::Cnot { control: a as u8, target: b as u8 });
                }
            }
        }

        let codeword = &logical_basis_states()[0];
        let out_virt = virt.unitary().unwrap().mat_vec(codeword);
        let out_expl = explicit.unitary().unwrap().mat_vec(codeword);
        // Probabilities of frame-decoded outcomes must agree bitstring by
        // bitstring with the explicit-swap probabilities decoded plainly.
        for raw in 0..16usize {
            let bits = |i: usize| raw >> (3 - i) & 1 == 1;
            let raw_bits = [bits(0), bits(1), bits(2), bits(3)];
            let v = decode_measurement(raw_bits, frame).verdict;
            let p_virt = out_virt[raw].norm_sqr();
            // Find the explicit-basis string with the same plain decode.
            let mut matched = 0.0;
            for raw2 in 0..16usize {
                let bits2 = |i: usize| raw2 >> (3 - i) & 1 == 1;
                let rb2 = [bits2(0), bits2(1), bits2(2), bits2(3)];
                if decode_measurement(rb2, RelabelFrame::new()).verdict == v {
                    matched += out_expl[raw2].norm_sqr();
                }
            }
            let mut matched_virt = 0.0;
            for raw2 in 0..16usize {
                let bits2 = |i: usize| raw2 >> (3 - i) & 1 == 1;
                let rb2 = [bits2(0), bits2(1), bits2(2), bits2(3)];
                if decode_measurement(rb2, frame).verdict == v {
                    matched_virt += out_virt[raw2].norm_sqr();
                }
            }
            assert!((matched - matched_virt).abs() < 1e-10, "verdict class mismatch at {raw}");
            let _ = p_virt;
        }
    }

    #[test]
    fn phased_frame_inverts_exactly() {
        for platform in [Platform::Logical422, Platform::Bare2q] {
            let (pre, post) = phased_frame_circuit(platform);
            let mut c = pre.clone();
            c.append(&post);
            let dim = 1 << c.n_qubits();
            assert!(c
                .unitary()
                .unwrap()
                .approx_eq_up_to_phase(&CMat::identity(dim), 1e-12));
        }
    }

    #[test]
    fn bare_frame_rotates_each_qubit() {
        let (pre, _) = phased_frame_circuit(Platform::Bare2q);
        let u = pre.unitary().unwrap();
        let out = u.mat_vec(&zero_state(2));
        // (P H (x) P H)|00>: all amplitudes 1/2 with phases 1, i, i, -1.
        let want = [
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.0, 0.5),
            C64::new(-0.5, 0.0),
        ];
        for (a, b) in out.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn logical_frame_b_elimination_check() {
        // With the unconjugated codeword effect, Tr[E rho_+] = Tr[E]/4.
        let (pre, _) = phased_frame_circuit(Platform::Logical422);
        let u = restrict_to_code_space(&pre.unitary().unwrap(), 1e-10).unwrap();
        let mut e0 = CMat::zeros(4, 4);
        e0[(0, 0)] = ONE;
        let rho = e0.conjugate_with(&u);
        let c = decay_constants(&e0, &rho);
        assert!((c.b_amplitude - 0.0).abs() < 1e-12);
        assert!((c.asymptote - 0.25).abs() < 1e-12);
    }

    #[test]
    fn operational_phased_constants() {
        // With the effect conjugated by the frame (the protocol applies the
        // inverse frame before measuring), B = 1/4 and C = 1/2.
        for platform in [Platform::Logical422, Platform::Bare2q] {
            let c = phased_frame_constants(platform).unwrap();
            assert!((c.asymptote - 0.25).abs() < 1e-12);
            assert!((c.b_amplitude - 0.25).abs() < 1e-12, "B = {}", c.b_amplitude);
            assert!((c.c_amplitude - 0.5).abs() < 1e-12, "C = {}", c.c_amplitude);
        }
    }

    #[test]
    fn decode_encode_consistency() {
        // Each noiselessly prepared logical basis state decodes to its own
        // bits with certainty and no rejections.
        for (idx, state) in logical_basis_states().iter().enumerate() {
            let want = [(idx >> 1) & 1 == 1, idx & 1 == 1];
            for raw in 0..16usize {
                let p = state[raw].norm_sqr();
                if p < 1e-18 {
                    continue;
                }
                let bits = |i: usize| raw >> (3 - i) & 1 == 1;
                let outcome =
                    decode_measurement([bits(0), bits(1), bits(2), bits(3)], RelabelFrame::new());
                assert_eq!(outcome.verdict, Verdict::Accepted(want));
            }
        }
    }
}
