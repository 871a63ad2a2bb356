//! Dense density-matrix simulation of noisy circuits.
//!
//! Dimensions stay at or below 32 (five qubits), so everything is dense.
//! Gate unitaries and embedded channels are cached per register; the
//! depolarizing and ZZ-crosstalk channels get closed-form fast paths
//! (partial-trace mixing and diagonal phase conjugation).

use crate::channel::NoiseChannel;
use crate::circuit::{Circuit, Gate, Op};
use crate::cmat::{C64, CMat, ONE, ZERO};
use crate::error::{Error, Result};
use crate::noise::{ChannelSpec, MeasureFlips, NoiseModel};
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// |0...0><0...0| on `n` qubits.
    pub fn zero_state(n: usize) -> Self {
        let mut mat = CMat::zeros(1 << n, 1 << n);
        mat[(0, 0)] = ONE;
        Self { n, mat }
    }

    pub fn from_pure(state: &[C64]) -> Self {
        let dim = state.len();
        assert!(dim.is_power_of_two());
        let n = dim.trailing_zeros() as usize;
        let mut mat = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = state[i] * state[j].conj();
            }
        }
        Self { n, mat }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut CMat {
        &mut self.mat
    }

    /// Hermiticity, unit trace, and positivity within tolerances.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if !self.mat.is_hermitian(tol) {
            return Err(Error::InvalidParameter(alloc::string::String::from(
                "density matrix is not Hermitian",
            )));
        }
        if (self.mat.trace().re - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(alloc::string::String::from(
                "density matrix trace differs from one",
            )));
        }
        let min_eig = self.mat.hermitian_eigenvalues()[0];
        if min_eig < -1e-9 {
            return Err(Error::InvalidParameter(alloc::format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Computational-basis outcome probabilities (clamped diagonal).
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| libm::fmax(self.mat[(i, i)].re, 0.0)).collect()
    }
}

/// Channel in applied form, specialized where a fast path exists.
#[derive(Clone, Debug)]
enum Applied {
    Kraus(NoiseChannel),
    Depolarizing { targets: Vec<usize>, p: f64 },
}

impl Applied {
    fn realize(spec: &ChannelSpec, n: usize, targets: &[usize]) -> Result<Option<Applied>> {
        match spec {
            ChannelSpec::None => Ok(None),
            ChannelSpec::Depolarizing { p } => {
                Ok(Some(Applied::Depolarizing { targets: targets.to_vec(), p: *p }))
            }
            _ => Ok(spec.realize(n, targets)?.map(Applied::Kraus)),
        }
    }

    fn apply(&self, rho: &mut DensityMatrix) {
        match self {
            Applied::Kraus(ch) => rho.mat = ch.apply(&rho.mat),
            Applied::Depolarizing { targets, p } => {
                apply_depolarizing(rho, targets, *p);
            }
        }
    }
}

/// In-place global depolarizing on the target wires:
/// `rho -> (1-p) rho + p (I_T / d_T) (x) Tr_T rho`.
fn apply_depolarizing(rho: &mut DensityMatrix, targets: &[usize], p: f64) {
    let n = rho.n;
    let dim = rho.dim();
    let d_t = 1usize << targets.len();
    let mut mask = 0usize;
    for &t in targets {
        mask |= 1 << (n - 1 - t);
    }
    let mut out = CMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let keep = rho.mat[(i, j)].scale(1.0 - p);
            let mixed = if i & mask == j & mask {
                // Average over the traced-out subregister.
                let mut acc = ZERO;
                let base_i = i & !mask;
                let base_j = j & !mask;
                for s in 0..d_t {
                    let bits = spread_bits(s, mask);
                    acc += rho.mat[(base_i | bits, base_j | bits)];
                }
                acc.scale(p / d_t as f64)
            } else {
                ZERO
            };
            out[(i, j)] = keep + mixed;
        }
    }
    rho.mat = out;
}

/// Scatter the low bits of `value` onto the set bits of `mask`.
fn spread_bits(value: usize, mask: usize) -> usize {
    let mut out = 0usize;
    let mut v = value;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if v & 1 == 1 {
            out |= low;
        }
        v >>= 1;
        m ^= low;
    }
    out
}

/// Simulator for one register size and noise model. Caches embedded gates
/// and channels; reusable across circuits and sequences.
pub struct Simulator {
    n: usize,
    model: NoiseModel,
    gate_cache: HashMap<Gate, CMat>,
    single_cache: Vec<Option<Applied>>,
    idle_cache: Vec<Option<Applied>>,
    pair_cache: HashMap<(u8, u8), Option<Applied>>,
    penalty_cache: HashMap<(u8, u8), Option<Applied>>,
    element_channel: Option<Applied>,
    state_prep: Option<Applied>,
    /// Diagonal phase vector per crosstalk pair.
    crosstalk_diags: Vec<Vec<C64>>,
}

impl Simulator {
    /// `element_scope` lists the wires covered by the per-element channel
    /// (the data wires of the platform).
    pub fn new(n: usize, model: NoiseModel, element_scope: Vec<usize>) -> Result<Self> {
        model.validate()?;
        for pair in model.crosstalk.iter() {
            if pair.a >= n || pair.b >= n {
                return Err(Error::QubitOutOfRange { qubit: pair.a.max(pair.b), n });
            }
        }
        let single_cache = (0..n)
            .map(|w| Applied::realize(&model.single_qubit, n, &[w]))
            .collect::<Result<Vec<_>>>()?;
        let idle_cache = (0..n)
            .map(|w| Applied::realize(&model.idle, n, &[w]))
            .collect::<Result<Vec<_>>>()?;
        let element_channel = Applied::realize(&model.element, n, &element_scope)?;
        let all_wires: Vec<usize> = (0..n).collect();
        let state_prep = Applied::realize(&model.state_prep, n, &all_wires)?;
        let crosstalk_diags = model
            .crosstalk
            .iter()
            .map(|pair| {
                let dim = 1usize << n;
                let abit = 1usize << (n - 1 - pair.a);
                let bbit = 1usize << (n - 1 - pair.b);
                (0..dim)
                    .map(|i| {
                        let sign =
                            if (i & abit != 0) ^ (i & bbit != 0) { -1.0 } else { 1.0 };
                        C64::from_polar(1.0, pair.theta * sign)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            model,
            gate_cache: HashMap::new(),
            single_cache,
            idle_cache,
            pair_cache: HashMap::new(),
            penalty_cache: HashMap::new(),
            element_channel,
            state_prep,
            crosstalk_diags,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    fn gate_unitary(&mut self, gate: Gate) -> Result<&CMat> {
        if !self.gate_cache.contains_key(&gate) {
            let u = gate.embed(self.n)?;
            self.gate_cache.insert(gate, u);
        }
        Ok(&self.gate_cache[&gate])
    }

    fn pair_channel(&mut self, key: (u8, u8)) -> Result<Option<Applied>> {
        if !self.pair_cache.contains_key(&key) {
            let applied = Applied::realize(
                &self.model.two_qubit,
                self.n,
                &[key.0 as usize, key.1 as usize],
            )?;
            self.pair_cache.insert(key, applied);
        }
        Ok(self.pair_cache[&key].clone())
    }

    fn penalty_channel(&mut self, key: (u8, u8)) -> Result<Option<Applied>> {
        if !self.penalty_cache.contains_key(&key) {
            let applied = Applied::realize(
                &self.model.cnot_penalty,
                self.n,
                &[key.0 as usize, key.1 as usize],
            )?;
            self.penalty_cache.insert(key, applied);
        }
        Ok(self.penalty_cache[&key].clone())
    }

    fn apply_crosstalk(&self, rho: &mut DensityMatrix) {
        for diag in self.crosstalk_diags.iter() {
            let dim = rho.dim();
            for i in 0..dim {
                for j in 0..dim {
                    let f = diag[i] * diag[j].conj();
                    rho.mat[(i, j)] *= f;
                }
            }
        }
    }

    /// Run a circuit from |0...0>, including state-preparation noise.
    pub fn run(&mut self, circuit: &Circuit) -> Result<DensityMatrix> {
        let mut rho = DensityMatrix::zero_state(self.n);
        if let Some(prep) = self.state_prep.clone() {
            prep.apply(&mut rho);
        }
        self.apply_circuit(&mut rho, circuit)?;
        Ok(rho)
    }

    /// Apply a circuit to an existing state: each gate is followed by its
    /// gate-class channel, idle noise on untouched wires, and one crosstalk
    /// rotation per configured pair; element boundaries fire the per-element
    /// channel over the element scope.
    pub fn apply_circuit(&mut self, rho: &mut DensityMatrix, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: circuit.n_qubits(), right: self.n });
        }
        for op in circuit.ops() {
            match op {
                Op::Gate(g) => {
                    let u = self.gate_unitary(*g)?;
                    rho.mat = rho.mat.conjugate_with(u);
                    match g.qubits() {
                        (q, None) => {
                            if let Some(ch) = self.single_cache[q as usize].clone() {
                                ch.apply(rho);
                            }
                            self.apply_idle(rho, &[q as usize]);
                        }
                        (c, Some(t)) => {
                            if let Some(ch) = self.pair_channel((c, t))? {
                                ch.apply(rho);
                            }
                            if let Some(ch) = self.penalty_channel((c, t))? {
                                ch.apply(rho);
                            }
                            self.apply_idle(rho, &[c as usize, t as usize]);
                        }
                    }
                    self.apply_crosstalk(rho);
                }
                Op::ElementBoundary => {
                    if let Some(ch) = self.element_channel.clone() {
                        ch.apply(rho);
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_idle(&self, rho: &mut DensityMatrix, busy: &[usize]) {
        if self.model.idle.is_none() {
            return;
        }
        for w in 0..self.n {
            if busy.contains(&w) {
                continue;
            }
            if let Some(ch) = self.idle_cache[w].clone() {
                ch.apply(rho);
            }
        }
    }

    /// Sample computational-basis outcomes with per-qubit measurement flips.
    pub fn measure_all(&self, rho: &DensityMatrix, shots: u32, seed: u64) -> Vec<u32> {
        measure_all(rho, shots, seed, &self.flips_vec())
    }

    fn flips_vec(&self) -> Vec<MeasureFlips> {
        (0..self.n).map(|w| self.model.flips_for(w)).collect()
    }
}

/// One-shot convenience wrapper over [`Simulator`].
pub fn apply_circuit(
    rho: &DensityMatrix,
    circuit: &Circuit,
    model: &NoiseModel,
    element_scope: &[usize],
) -> Result<DensityMatrix> {
    let mut sim = Simulator::new(rho.n(), model.clone(), element_scope.to_vec())?;
    let mut out = rho.clone();
    sim.apply_circuit(&mut out, circuit)?;
    Ok(out)
}

/// Sample `shots` basis outcomes from diag(rho), flipping each read-out bit
/// with its configured probability. Deterministic for a given seed.
pub fn measure_all(
    rho: &DensityMatrix,
    shots: u32,
    seed: u64,
    flips: &[MeasureFlips],
) -> Vec<u32> {
    let n = rho.n();
    let dim = rho.dim();
    let probs = rho.probabilities();
    let total: f64 = probs.iter().sum();
    let mut cdf = Vec::with_capacity(dim);
    let mut acc = 0.0;
    for p in probs.iter() {
        acc += p / total;
        cdf.push(acc);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hist = vec![0u32; dim];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let mut idx = cdf.partition_point(|&c| c < u);
        if idx >= dim {
            idx = dim - 1;
        }
        for (w, flip) in flips.iter().enumerate() {
            let bit = 1usize << (n - 1 - w);
            let is_one = idx & bit != 0;
            let p = if is_one { flip.p10 } else { flip.p01 };
            if p > 0.0 && rng.gen::<f64>() < p {
                idx ^= bit;
            }
        }
        hist[idx] += 1;
    }
    hist
}
