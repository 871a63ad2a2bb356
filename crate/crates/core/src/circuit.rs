//! Physical circuits over the hardware gate vocabulary.
//!
//! Circuits are flat gate lists with boundary markers between group
//! elements. Boundaries carry no unitary action; the simulator fires
//! per-element noise there and the QASM exporter lowers them to barriers.

use crate::cmat::{C64, CMat, I, ONE};
use crate::error::{Error, Result};
use alloc::vec::Vec;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gate {
    X(u8),
    Y(u8),
    Z(u8),
    H(u8),
    /// Phase gate diag(1, i).
    S(u8),
    /// Inverse phase gate diag(1, -i).
    Sdg(u8),
    Cnot { control: u8, target: u8 },
}

impl Gate {
    pub fn qubits(&self) -> (u8, Option<u8>) {
        match *self {
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => {
                (q, None)
            }
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    /// Dense 2x2 block (single-qubit gates only).
    fn block(&self) -> CMat {
        let s = 1.0 / libm::sqrt(2.0);
        match *self {
            Gate::X(_) => CMat::from_rows(&[&[C64::new(0.0, 0.0), ONE], &[ONE, C64::new(0.0, 0.0)]]),
            Gate::Y(_) => CMat::from_rows(&[&[C64::new(0.0, 0.0), -I], &[I, C64::new(0.0, 0.0)]]),
            Gate::Z(_) => CMat::from_diag(&[ONE, -ONE]),
            Gate::H(_) => CMat::from_rows(&[
                &[C64::new(s, 0.0), C64::new(s, 0.0)],
                &[C64::new(s, 0.0), C64::new(-s, 0.0)],
            ]),
            Gate::S(_) => CMat::from_diag(&[ONE, I]),
            Gate::Sdg(_) => CMat::from_diag(&[ONE, -I]),
            Gate::Cnot { .. } => unreachable!("cnot has no single-qubit block"),
        }
    }

    /// Embed into an `n`-qubit unitary. Qubit 0 is the most significant
    /// index bit.
    pub fn embed(&self, n: usize) -> Result<CMat> {
        let dim = 1usize << n;
        let check = |q: u8| -> Result<()> {
            if (q as usize) < n {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { qubit: q as usize, n })
            }
        };
        match *self {
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidParameter(alloc::string::String::from(
                        "cnot control equals target",
                    )));
                }
                let cbit = 1usize << (n - 1 - control as usize);
                let tbit = 1usize << (n - 1 - target as usize);
                let mut m = CMat::zeros(dim, dim);
                for b in 0..dim {
                    let out = if b & cbit != 0 { b ^ tbit } else { b };
                    m[(out, b)] = ONE;
                }
                Ok(m)
            }
            _ => {
                let (q, _) = self.qubits();
                check(q)?;
                let bit = 1usize << (n - 1 - q as usize);
                let blk = self.block();
                let mut m = CMat::zeros(dim, dim);
                for b in 0..dim {
                    let row_base = b & !bit;
                    let bq = usize::from(b & bit != 0);
                    for rq in 0..2 {
                        let v = blk[(rq, bq)];
                        if v != C64::new(0.0, 0.0) {
                            let r = row_base | if rq == 1 { bit } else { 0 };
                            m[(r, b)] = v;
                        }
                    }
                }
                Ok(m)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Op {
    Gate(Gate),
    /// End of one group element of the benchmarking sequence.
    ElementBoundary,
}

#[derive(Clone, Debug, Default)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn push(&mut self, gate: Gate) {
        self.ops.push(Op::Gate(gate));
    }

    pub fn push_boundary(&mut self) {
        self.ops.push(Op::ElementBoundary);
    }

    pub fn extend_gates(&mut self, gates: &[Gate]) {
        for g in gates {
            self.push(*g);
        }
    }

    pub fn append(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.ops.extend_from_slice(&other.ops);
    }

    pub fn gate_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::Gate(_))).count()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Gate(g) if g.is_two_qubit()))
            .count()
    }

    pub fn boundary_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::ElementBoundary)).count()
    }

    /// Noiseless dense unitary of the whole circuit.
    pub fn unitary(&self) -> Result<CMat> {
        let dim = 1usize << self.n_qubits;
        let mut u = CMat::identity(dim);
        for op in self.ops.iter() {
            if let Op::Gate(g) = op {
                u = g.embed(self.n_qubits)?.mul(&u);
            }
        }
        Ok(u)
    }

    /// Exact inverse circuit (gates reversed and inverted, boundaries kept
    /// in mirrored positions).
    pub fn inverse(&self) -> Circuit {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match op {
                Op::Gate(g) => Op::Gate(g.inverse()),
                Op::ElementBoundary => Op::ElementBoundary,
            })
            .collect();
        Circuit { n_qubits: self.n_qubits, ops }
    }
}
