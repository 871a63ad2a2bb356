//! Benchmarking sequence generation and execution.
//!
//! Four run types: standard and phased runs on the encoded platform, and
//! the same two on bare physical qubits. Sequences draw uniformly from the
//! 576-element realizable group, append the exact group inverse, and fold
//! in a uniformly random compiled Pauli so that averaging pins the decay
//! asymptote at 1/4. Standard runs place the compiled Pauli at the start;
//! phased runs place it after the inverse frame has returned the state to
//! the computational basis.
//!
//! All randomness flows from a master seed through [`derive_seed`], so any
//! execution order (or degree of parallelism) reproduces identical results.

use crate::circuit::{Circuit, Gate};
use crate::code422::{
    self, CODE_QUBITS, EncodingMap, Platform, PrepMode, RelabelFrame, Verdict,
    decode_measurement, phased_frame_circuit, prepare_logical_00,
};
use crate::error::{Error, Result};
use crate::group::GroupCatalog;
use crate::noise::NoiseModel;
use crate::sim::Simulator;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum RunType {
    LogicalStandard,
    LogicalPhased,
    PhysicalStandard,
    PhysicalPhased,
}

impl RunType {
    pub const ALL: [RunType; 4] = [
        RunType::LogicalStandard,
        RunType::LogicalPhased,
        RunType::PhysicalStandard,
        RunType::PhysicalPhased,
    ];

    pub fn platform(&self) -> Platform {
        match self {
            RunType::LogicalStandard | RunType::LogicalPhased => Platform::Logical422,
            RunType::PhysicalStandard | RunType::PhysicalPhased => Platform::Bare2q,
        }
    }

    pub fn is_phased(&self) -> bool {
        matches!(self, RunType::LogicalPhased | RunType::PhysicalPhased)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RunType::LogicalStandard => "logical_standard",
            RunType::LogicalPhased => "logical_phased",
            RunType::PhysicalStandard => "physical_standard",
            RunType::PhysicalPhased => "physical_phased",
        }
    }

    pub fn parse(s: &str) -> Option<RunType> {
        RunType::ALL.iter().copied().find(|r| r.name() == s)
    }

    fn tag(&self) -> u64 {
        match self {
            RunType::LogicalStandard => 1,
            RunType::LogicalPhased => 2,
            RunType::PhysicalStandard => 3,
            RunType::PhysicalPhased => 4,
        }
    }
}

/// Arithmetic schedule of sequence lengths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LengthSchedule {
    pub start: usize,
    pub step: usize,
    pub end: usize,
}

impl Default for LengthSchedule {
    fn default() -> Self {
        // 2, 5, ..., 92: thirty-one lengths.
        Self { start: 2, step: 3, end: 92 }
    }
}

impl LengthSchedule {
    pub fn lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut m = self.start;
        while m <= self.end {
            out.push(m);
            m += self.step;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.step == 0 || self.start > self.end {
            return Err(Error::InvalidParameter(alloc::format!(
                "bad length schedule {}..{} step {}",
                self.start,
                self.end,
                self.step
            )));
        }
        Ok(())
    }
}

/// Run parameters shared by all four run types.
#[derive(Clone, Debug)]
pub struct RbRunConfig {
    pub schedule: LengthSchedule,
    pub sequences_per_length: usize,
    pub shots: u32,
    pub run_type: RunType,
    pub prep_mode: PrepMode,
    pub seed: u64,
}

impl RbRunConfig {
    pub fn new(run_type: RunType, seed: u64) -> Self {
        Self {
            schedule: LengthSchedule::default(),
            sequences_per_length: 36,
            shots: 1024,
            run_type,
            prep_mode: PrepMode::Plain,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if self.sequences_per_length == 0 || self.shots == 0 {
            return Err(Error::InvalidParameter(alloc::string::String::from(
                "sequence and shot counts must be positive",
            )));
        }
        Ok(())
    }
}

/// Deterministic seed derivation: a splitmix64 chain over the master seed
/// and the context words. Stable across platforms and releases.
pub fn derive_seed(master: u64, context: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    let mut state = splitmix(master);
    for &word in context {
        state = splitmix(state ^ word.wrapping_mul(0xff51afd7ed558ccd));
    }
    state
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CompiledPauli {
    II,
    IX,
    XI,
    XX,
}

impl CompiledPauli {
    pub const ALL: [CompiledPauli; 4] =
        [CompiledPauli::II, CompiledPauli::IX, CompiledPauli::XI, CompiledPauli::XX];

    pub fn from_index(i: usize) -> CompiledPauli {
        Self::ALL[i % 4]
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|p| p == self).expect("member")
    }

    pub fn name(&self) -> &'static str {
        match self {
            CompiledPauli::II => "II",
            CompiledPauli::IX => "IX",
            CompiledPauli::XI => "XI",
            CompiledPauli::XX => "XX",
        }
    }

    pub fn parse(s: &str) -> Option<CompiledPauli> {
        Self::ALL.iter().copied().find(|p| p.name() == s)
    }

    /// Expected logical bits when starting from |00>: the Pauli's flip
    /// pattern, (bit 1, bit 2).
    pub fn target_bits(&self) -> [bool; 2] {
        match self {
            CompiledPauli::II => [false, false],
            CompiledPauli::IX => [false, true],
            CompiledPauli::XI => [true, false],
            CompiledPauli::XX => [true, true],
        }
    }

    /// Catalog id of the corresponding group element.
    pub fn element_id(&self, catalog: &GroupCatalog) -> u32 {
        let e = match self {
            CompiledPauli::II => crate::clifford::CliffordElement::identity(2),
            CompiledPauli::XI => crate::gates::pauli_x(2, 0),
            CompiledPauli::IX => crate::gates::pauli_x(2, 1),
            CompiledPauli::XX => crate::gates::pauli_x(2, 0)
                .compose(&crate::gates::pauli_x(2, 1))
                .expect("same n"),
        };
        catalog.id_of(&e).expect("Paulis are in the realizable group")
    }
}

/// One random benchmarking sequence.
#[derive(Clone, Debug)]
pub struct RBSequence {
    pub m: usize,
    pub run_type: RunType,
    pub elements: Vec<u32>,
    pub inversion: u32,
    pub compiled_pauli: CompiledPauli,
}

/// Draw a sequence: `m` iid uniform elements, the exact group inverse of
/// their composition, and a uniform compiled Pauli (independent of the
/// element draws).
pub fn sample_sequence(
    catalog: &GroupCatalog,
    m: usize,
    run_type: RunType,
    rng: &mut impl RngCore,
) -> RBSequence {
    let order = catalog.order() as u32;
    let elements: Vec<u32> = (0..m).map(|_| rng.gen_range(0..order)).collect();
    let mut composed = 0u32; // identity id
    for &e in elements.iter() {
        composed = catalog.compose_ids(e, composed);
    }
    let inversion = catalog.inverse_id(composed);
    let compiled_pauli = CompiledPauli::from_index(rng.gen_range(0..4usize));
    RBSequence { m, run_type, elements, inversion, compiled_pauli }
}

/// Everything needed to turn sequences into circuits.
pub struct RealizeContext<'a> {
    /// The realizable group (the twirl ensemble), with code-gate-set words.
    pub realizable: &'a GroupCatalog,
    /// Closure of the elementary gate set, for bare-platform words.
    /// Required for the physical run types.
    pub elementary: Option<&'a GroupCatalog>,
    pub prep_mode: PrepMode,
}

/// A sequence lowered to a physical circuit plus its decode metadata.
#[derive(Clone, Debug)]
pub struct RealizedSequence {
    pub circuit: Circuit,
    pub platform: Platform,
    /// Relabel frame at measurement time (encoded platform).
    pub final_frame: RelabelFrame,
    pub target_bits: [bool; 2],
    pub data_wires: Vec<usize>,
    pub ancilla_wire: Option<usize>,
}

impl RealizedSequence {
    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }
}

fn bare_gate(gen_id: u16) -> Gate {
    // gates::bare_generators order: x1 x2 z1 z2 h1 h2 s1 s2 cx12.
    match gen_id {
        0 => Gate::X(0),
        1 => Gate::X(1),
        2 => Gate::Z(0),
        3 => Gate::Z(1),
        4 => Gate::H(0),
        5 => Gate::H(1),
        6 => Gate::S(0),
        7 => Gate::S(1),
        8 => Gate::Cnot { control: 0, target: 1 },
        _ => panic!("elementary gate set has 9 generators"),
    }
}

fn append_ops(dst: &mut Circuit, src: &Circuit) {
    for op in src.ops() {
        match op {
            crate::circuit::Op::Gate(g) => dst.push(*g),
            crate::circuit::Op::ElementBoundary => dst.push_boundary(),
        }
    }
}

/// Lower a sequence onto its platform.
///
/// Encoded platform: preparation circuit, then per element the minimal
/// code-gate-set word (virtual gates update the relabel frame and cost
/// nothing), with a boundary after every group element. Phased runs wrap
/// the twirl in the state-rotation frame and compile the Pauli in after
/// the inverse frame.
///
/// Bare platform: per element the minimal word over the elementary gate
/// set {X, Z, H, P, CNOT}.
pub fn realize_physical(seq: &RBSequence, ctx: &RealizeContext) -> Result<RealizedSequence> {
    match seq.run_type.platform() {
        Platform::Logical422 => realize_logical(seq, ctx),
        Platform::Bare2q => realize_bare(seq, ctx),
    }
}

fn realize_logical(seq: &RBSequence, ctx: &RealizeContext) -> Result<RealizedSequence> {
    let n = match ctx.prep_mode {
        PrepMode::Plain => CODE_QUBITS,
        PrepMode::FaultTolerantAncilla => CODE_QUBITS + 1,
    };
    let mut circuit = Circuit::new(n);
    let prep = prepare_logical_00(ctx.prep_mode);
    append_ops(&mut circuit, &prep.circuit);

    let mut map = EncodingMap::new();
    let catalog = ctx.realizable;
    let pauli_word: Vec<u16> = catalog.word(seq.compiled_pauli.element_id(catalog)).to_vec();

    fn emit(circuit: &mut Circuit, map: &mut EncodingMap, word: &[u16]) {
        map.emit_word(circuit, word);
        circuit.push_boundary();
    }

    // Frame circuits are prescribed on code wires, so they are routed
    // through the relabel frame like any table gate.
    fn append_routed(circuit: &mut Circuit, map: &EncodingMap, src: &Circuit) {
        for op in src.ops() {
            match op {
                crate::circuit::Op::Gate(g) => circuit.push(map.route_gate(*g)),
                crate::circuit::Op::ElementBoundary => circuit.push_boundary(),
            }
        }
    }

    let phased = seq.run_type.is_phased();
    if !phased {
        emit(&mut circuit, &mut map, &pauli_word);
    } else {
        let (pre, _) = phased_frame_circuit(Platform::Logical422);
        append_routed(&mut circuit, &map, &pre);
    }
    for &e in seq.elements.iter() {
        emit(&mut circuit, &mut map, catalog.word(e));
    }
    emit(&mut circuit, &mut map, catalog.word(seq.inversion));
    if phased {
        let (_, post) = phased_frame_circuit(Platform::Logical422);
        append_routed(&mut circuit, &map, &post);
        emit(&mut circuit, &mut map, &pauli_word);
    }

    Ok(RealizedSequence {
        circuit,
        platform: Platform::Logical422,
        final_frame: map.frame(),
        target_bits: seq.compiled_pauli.target_bits(),
        data_wires: (0..CODE_QUBITS).collect(),
        ancilla_wire: (ctx.prep_mode == PrepMode::FaultTolerantAncilla)
            .then_some(code422::ANCILLA_WIRE),
    })
}

fn realize_bare(seq: &RBSequence, ctx: &RealizeContext) -> Result<RealizedSequence> {
    let elementary = ctx.elementary.ok_or_else(|| {
        Error::InvalidParameter(alloc::string::String::from(
            "bare platform requires the elementary-gate catalog",
        ))
    })?;
    let mut circuit = Circuit::new(2);
    let word_of = |id: u32| -> Result<Vec<u16>> {
        let element = ctx.realizable.element(id);
        elementary.minimal_word(element).map(<[u16]>::to_vec)
    };
    fn emit(circuit: &mut Circuit, word: &[u16]) {
        for gid in word {
            circuit.push(bare_gate(*gid));
        }
        circuit.push_boundary();
    }

    let pauli_word = word_of(seq.compiled_pauli.element_id(ctx.realizable))?;
    let phased = seq.run_type.is_phased();
    if !phased {
        emit(&mut circuit, &pauli_word);
    } else {
        let (pre, _) = phased_frame_circuit(Platform::Bare2q);
        append_ops(&mut circuit, &pre);
    }
    for &e in seq.elements.iter() {
        emit(&mut circuit, &word_of(e)?);
    }
    emit(&mut circuit, &word_of(seq.inversion)?);
    if phased {
        let (_, post) = phased_frame_circuit(Platform::Bare2q);
        append_ops(&mut circuit, &post);
        emit(&mut circuit, &pauli_word);
    }

    Ok(RealizedSequence {
        circuit,
        platform: Platform::Bare2q,
        final_frame: RelabelFrame::new(),
        target_bits: seq.compiled_pauli.target_bits(),
        data_wires: vec![0, 1],
        ancilla_wire: None,
    })
}

/// Outcome statistics of one simulated (or ingested) sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurvivalRecord {
    pub m: usize,
    pub replicate: usize,
    pub compiled_pauli: CompiledPauli,
    pub total_shots: u32,
    /// Shots discarded because the preparation ancilla read 1.
    pub ancilla_rejected: u32,
    /// Even-parity shots (equals total on the bare platform).
    pub accepted: u32,
    /// Accepted shots whose decoded bits matched the compiled-Pauli target.
    pub successes: u32,
    pub seed: u64,
}

/// Classify a histogram of measured basis states into a survival record.
pub fn tally_outcomes(
    realized: &RealizedSequence,
    histogram: &[u32],
    m: usize,
    replicate: usize,
    pauli: CompiledPauli,
    seed: u64,
) -> SurvivalRecord {
    let n = realized.n_qubits();
    let mut total = 0u32;
    let mut ancilla_rejected = 0u32;
    let mut accepted = 0u32;
    let mut successes = 0u32;
    for (idx, &count) in histogram.iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count;
        let bit = |wire: usize| idx >> (n - 1 - wire) & 1 == 1;
        match realized.platform {
            Platform::Logical422 => {
                if let Some(a) = realized.ancilla_wire {
                    if bit(a) {
                        ancilla_rejected += count;
                        continue;
                    }
                }
                let raw = [bit(0), bit(1), bit(2), bit(3)];
                match decode_measurement(raw, realized.final_frame).verdict {
                    Verdict::Rejected => {}
                    Verdict::Accepted(bits) => {
                        accepted += count;
                        if bits == realized.target_bits {
                            successes += count;
                        }
                    }
                }
            }
            Platform::Bare2q => {
                accepted += count;
                let bits = [bit(0), bit(1)];
                if bits == realized.target_bits {
                    successes += count;
                }
            }
        }
    }
    SurvivalRecord {
        m,
        replicate,
        compiled_pauli: pauli,
        total_shots: total,
        ancilla_rejected,
        accepted,
        successes,
        seed,
    }
}

/// Simulate one realized sequence and tally its outcomes.
pub fn run_sequence(
    realized: &RealizedSequence,
    model: &NoiseModel,
    shots: u32,
    seed: u64,
    m: usize,
    replicate: usize,
    pauli: CompiledPauli,
) -> Result<SurvivalRecord> {
    let mut sim = Simulator::new(realized.n_qubits(), model.clone(), realized.data_wires.clone())?;
    let rho = sim.run(&realized.circuit)?;
    let hist = sim.measure_all(&rho, shots, seed);
    Ok(tally_outcomes(realized, &hist, m, replicate, pauli, seed))
}

/// Generate, realize, and simulate one full run type sequentially.
pub fn simulate_run(
    config: &RbRunConfig,
    ctx: &RealizeContext,
    model: &NoiseModel,
) -> Result<Vec<SurvivalRecord>> {
    config.validate()?;
    model.validate()?;
    let mut records = Vec::new();
    for m in config.schedule.lengths() {
        for replicate in 0..config.sequences_per_length {
            records.push(simulate_one(config, ctx, model, m, replicate)?);
        }
    }
    Ok(records)
}

/// Simulate a single (length, replicate) cell; the unit of parallelism for
/// concurrent drivers. Seeds derive from `(seed, run type, m, replicate)`.
pub fn simulate_one(
    config: &RbRunConfig,
    ctx: &RealizeContext,
    model: &NoiseModel,
    m: usize,
    replicate: usize,
) -> Result<SurvivalRecord> {
    let tag = config.run_type.tag();
    let gen_seed = derive_seed(config.seed, &[tag, m as u64, replicate as u64, 0]);
    let measure_seed = derive_seed(config.seed, &[tag, m as u64, replicate as u64, 1]);
    let mut rng = ChaCha12Rng::seed_from_u64(gen_seed);
    let seq = sample_sequence(ctx.realizable, m, config.run_type, &mut rng);
    let realized = realize_physical(&seq, ctx)?;
    run_sequence(&realized, model, config.shots, measure_seed, m, replicate, seq.compiled_pauli)
}

/// Regenerate the sequence for one (length, replicate) cell without
/// simulating it; used by the exporter and count ingestion.
pub fn regenerate_sequence(
    config: &RbRunConfig,
    ctx: &RealizeContext,
    m: usize,
    replicate: usize,
) -> Result<(RBSequence, RealizedSequence)> {
    let tag = config.run_type.tag();
    let gen_seed = derive_seed(config.seed, &[tag, m as u64, replicate as u64, 0]);
    let mut rng = ChaCha12Rng::seed_from_u64(gen_seed);
    let seq = sample_sequence(ctx.realizable, m, config.run_type, &mut rng);
    let realized = realize_physical(&seq, ctx)?;
    Ok((seq, realized))
}

/// Pooled per-length survival statistics.
#[derive(Clone, Copy, Debug)]
pub struct SurvivalPoint {
    pub m: usize,
    /// Pooled conditional survival: successes over accepted shots.
    pub q_bar: f64,
    pub accepted: u64,
    pub total_shots: u64,
    /// Fraction of shots discarded by parity (and ancilla) rejection.
    pub discard_fraction: f64,
    pub n_sequences: usize,
}

#[derive(Clone, Debug)]
pub struct SurvivalEstimate {
    pub points: Vec<SurvivalPoint>,
    /// Lengths where no shot survived post-selection (excluded from fits).
    pub excluded_lengths: Vec<usize>,
}

/// Pool records by length (ratio of sums, binomially weighted).
pub fn estimate_survival(records: &[SurvivalRecord]) -> SurvivalEstimate {
    let mut by_m: BTreeMap<usize, Vec<&SurvivalRecord>> = BTreeMap::new();
    for r in records {
        by_m.entry(r.m).or_default().push(r);
    }
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (m, rs) in by_m {
        let total: u64 = rs.iter().map(|r| r.total_shots as u64).sum();
        let accepted: u64 = rs.iter().map(|r| r.accepted as u64).sum();
        let successes: u64 = rs.iter().map(|r| r.successes as u64).sum();
        if accepted == 0 {
            excluded.push(m);
            continue;
        }
        points.push(SurvivalPoint {
            m,
            q_bar: successes as f64 / accepted as f64,
            accepted,
            total_shots: total,
            discard_fraction: 1.0 - accepted as f64 / total as f64,
            n_sequences: rs.len(),
        });
    }
    SurvivalEstimate { points, excluded_lengths: excluded }
}

/// Per-length survival over *all* shots (rejected shots count as failures):
/// the no-post-selection view of the same records.
pub fn estimate_survival_no_postselection(records: &[SurvivalRecord]) -> SurvivalEstimate {
    let mut by_m: BTreeMap<usize, Vec<&SurvivalRecord>> = BTreeMap::new();
    for r in records {
        by_m.entry(r.m).or_default().push(r);
    }
    let mut points = Vec::new();
    for (m, rs) in by_m {
        let total: u64 = rs.iter().map(|r| r.total_shots as u64).sum();
        let successes: u64 = rs.iter().map(|r| r.successes as u64).sum();
        points.push(SurvivalPoint {
            m,
            q_bar: successes as f64 / total as f64,
            accepted: total,
            total_shots: total,
            discard_fraction: 0.0,
            n_sequences: rs.len(),
        });
    }
    SurvivalEstimate { points, excluded_lengths: Vec::new() }
}
