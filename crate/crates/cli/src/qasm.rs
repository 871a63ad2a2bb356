//! OpenQASM 2.0 export and a grammar-subset parser/validator.
//!
//! Emitted programs use exactly the vocabulary `qreg creg h x z s cx
//! barrier measure` with the standard header and include line. Barriers
//! appear exactly at group-element boundaries. Every emitted `cx` respects
//! the directed topology; reversed edges cost four Hadamards and two-hop
//! routes use the four-CNOT identity.

use crate::topology::{
    ANCILLA_QUBIT, BARE_QUBITS, DATA_QUBITS, DeviceTopology, QUBIT_COUNT, RoutedGate,
};
use anyhow::{Context, Result, anyhow, bail};
use rb422_core::circuit::{Circuit, Gate, Op};
use rb422_core::code422::Platform;
use rb422_core::rb::RealizedSequence;
use std::fmt::Write as _;

/// Device wire assignment for one realized sequence.
fn wire_map(realized: &RealizedSequence) -> Vec<u8> {
    match realized.platform {
        Platform::Logical422 => {
            let mut map: Vec<u8> = DATA_QUBITS.to_vec();
            if realized.ancilla_wire.is_some() {
                map.push(ANCILLA_QUBIT);
            }
            map
        }
        Platform::Bare2q => BARE_QUBITS.to_vec(),
    }
}

/// Render one realized sequence as an OpenQASM 2.0 program.
pub fn emit_qasm(realized: &RealizedSequence, topo: &DeviceTopology) -> Result<String> {
    let map = wire_map(realized);
    let dev = |w: u8| map[w as usize];
    let n_clbits = map.len();
    let mut out = String::new();
    writeln!(out, "OPENQASM 2.0;")?;
    writeln!(out, "include \"qelib1.inc\";")?;
    writeln!(out, "qreg q[{QUBIT_COUNT}];")?;
    writeln!(out, "creg c[{n_clbits}];")?;
    let barrier_args: Vec<String> =
        map.iter().take(4.min(map.len())).map(|d| format!("q[{d}]")).collect();
    let barrier_line = format!("barrier {};", barrier_args.join(","));
    for op in realized.circuit.ops() {
        match op {
            Op::ElementBoundary => writeln!(out, "{barrier_line}")?,
            Op::Gate(g) => match *g {
                Gate::X(q) => writeln!(out, "x q[{}];", dev(q))?,
                Gate::Z(q) => writeln!(out, "z q[{}];", dev(q))?,
                Gate::H(q) => writeln!(out, "h q[{}];", dev(q))?,
                Gate::S(q) => writeln!(out, "s q[{}];", dev(q))?,
                // diag(1,-i) = Z S as operators: emit s then z.
                Gate::Sdg(q) => {
                    writeln!(out, "s q[{}];", dev(q))?;
                    writeln!(out, "z q[{}];", dev(q))?;
                }
                // Y = X Z up to global phase: emit z then x.
                Gate::Y(q) => {
                    writeln!(out, "z q[{}];", dev(q))?;
                    writeln!(out, "x q[{}];", dev(q))?;
                }
                Gate::Cnot { control, target } => {
                    for routed in topo.route_cnot_preferring(dev(control), dev(target), &map)? {
                        match routed {
                            RoutedGate::H(d) => writeln!(out, "h q[{d}];")?,
                            RoutedGate::Cx(c, t) => writeln!(out, "cx q[{c}],q[{t}];")?,
                        }
                    }
                }
            },
        }
    }
    for (clbit, d) in map.iter().enumerate() {
        writeln!(out, "measure q[{d}] -> c[{clbit}];")?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedOp {
    Gate { name: String, qubits: Vec<usize> },
    Barrier(Vec<usize>),
    Measure { qubit: usize, clbit: usize },
}

#[derive(Clone, Debug)]
pub struct ParsedProgram {
    pub qreg: (String, usize),
    pub creg: (String, usize),
    pub ops: Vec<ParsedOp>,
}

const GATE_VOCABULARY: [(&str, usize); 5] = [("h", 1), ("x", 1), ("z", 1), ("s", 1), ("cx", 2)];

/// Parse the emitted OpenQASM 2.0 subset.
pub fn parse_qasm(src: &str) -> Result<ParsedProgram> {
    // Strip comments, then split statements on ';'.
    let cleaned: String = src
        .lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let mut statements = cleaned
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty());
    let header = statements.next().context("empty program")?;
    if header != "OPENQASM 2.0" {
        bail!("expected OPENQASM 2.0 header, found {header:?}");
    }
    let mut qreg: Option<(String, usize)> = None;
    let mut creg: Option<(String, usize)> = None;
    let mut ops = Vec::new();
    for stmt in statements {
        if stmt.starts_with("include") {
            if stmt != "include \"qelib1.inc\"" {
                bail!("unsupported include: {stmt}");
            }
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            if qreg.is_some() {
                bail!("multiple qreg declarations");
            }
            qreg = Some(parse_reg(rest)?);
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("creg ") {
            if creg.is_some() {
                bail!("multiple creg declarations");
            }
            creg = Some(parse_reg(rest)?);
            continue;
        }
        let qreg_name = &qreg.as_ref().context("gate before qreg declaration")?.0;
        if let Some(rest) = stmt.strip_prefix("barrier ") {
            let qubits = rest
                .split(',')
                .map(|a| parse_indexed(a.trim(), qreg_name))
                .collect::<Result<Vec<_>>>()?;
            ops.push(ParsedOp::Barrier(qubits));
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("measure ") {
            let (lhs, rhs) = rest
                .split_once("->")
                .context("measure needs '->'")?;
            let qubit = parse_indexed(lhs.trim(), qreg_name)?;
            let creg_name = &creg.as_ref().context("measure before creg")?.0;
            let clbit = parse_indexed(rhs.trim(), creg_name)?;
            ops.push(ParsedOp::Measure { qubit, clbit });
            continue;
        }
        let (name, args) = stmt
            .split_once(' ')
            .with_context(|| format!("malformed statement: {stmt}"))?;
        let arity = GATE_VOCABULARY
            .iter()
            .find(|(g, _)| *g == name)
            .map(|(_, a)| *a)
            .with_context(|| format!("gate {name:?} outside the supported vocabulary"))?;
        let qubits = args
            .split(',')
            .map(|a| parse_indexed(a.trim(), qreg_name))
            .collect::<Result<Vec<_>>>()?;
        if qubits.len() != arity {
            bail!("gate {name} expects {arity} operand(s), got {}", qubits.len());
        }
        ops.push(ParsedOp::Gate { name: name.to_string(), qubits });
    }
    Ok(ParsedProgram {
        qreg: qreg.context("missing qreg")?,
        creg: creg.context("missing creg")?,
        ops,
    })
}

fn parse_reg(rest: &str) -> Result<(String, usize)> {
    let (name, size) = rest
        .trim()
        .strip_suffix(']')
        .and_then(|s| s.split_once('['))
        .context("register declaration must look like name[size]")?;
    Ok((name.trim().to_string(), size.parse()?))
}

fn parse_indexed(arg: &str, reg: &str) -> Result<usize> {
    let (name, idx) = arg
        .strip_suffix(']')
        .and_then(|s| s.split_once('['))
        .with_context(|| format!("expected {reg}[i], found {arg:?}"))?;
    if name.trim() != reg {
        bail!("unknown register {name:?}");
    }
    Ok(idx.parse()?)
}

/// Grammar-and-topology validation: register bounds and directed-edge
/// compliance for every two-qubit gate.
pub fn validate_program(prog: &ParsedProgram, topo: &DeviceTopology) -> Result<()> {
    let (qn, qsize) = (&prog.qreg.0, prog.qreg.1);
    if qsize > QUBIT_COUNT {
        bail!("qreg {qn} exceeds the {QUBIT_COUNT}-qubit device");
    }
    for op in prog.ops.iter() {
        match op {
            ParsedOp::Gate { name, qubits } => {
                for &q in qubits {
                    if q >= qsize {
                        bail!("qubit index {q} out of range");
                    }
                }
                if name == "cx" && !topo.has_edge(qubits[0] as u8, qubits[1] as u8) {
                    bail!("cx q[{}],q[{}] is not a directed edge", qubits[0], qubits[1]);
                }
            }
            ParsedOp::Barrier(qubits) => {
                for &q in qubits {
                    if q >= qsize {
                        bail!("barrier qubit {q} out of range");
                    }
                }
            }
            ParsedOp::Measure { qubit, clbit } => {
                if *qubit >= qsize || *clbit >= prog.creg.1 {
                    bail!("measure operands out of range");
                }
            }
        }
    }
    Ok(())
}

/// Lower a parsed program back onto the local register it came from
/// (data wires + optional ancilla, or the bare pair). Returns the local
/// circuit and the wire measured into each classical bit.
pub fn to_local_circuit(
    prog: &ParsedProgram,
    platform: Platform,
    with_ancilla: bool,
) -> Result<(Circuit, Vec<usize>)> {
    let device_wires: Vec<u8> = match platform {
        Platform::Logical422 => {
            let mut v = DATA_QUBITS.to_vec();
            if with_ancilla {
                v.push(ANCILLA_QUBIT);
            }
            v
        }
        Platform::Bare2q => BARE_QUBITS.to_vec(),
    };
    let local_of = |device: usize| -> Result<u8> {
        device_wires
            .iter()
            .position(|&d| d as usize == device)
            .map(|i| i as u8)
            .ok_or_else(|| anyhow!("device qubit {device} is outside the experiment role map"))
    };
    let mut circuit = Circuit::new(device_wires.len());
    let mut measures = vec![usize::MAX; prog.creg.1];
    for op in prog.ops.iter() {
        match op {
            ParsedOp::Barrier(_) => circuit.push_boundary(),
            ParsedOp::Measure { qubit, clbit } => {
                measures[*clbit] = local_of(*qubit)? as usize;
            }
            ParsedOp::Gate { name, qubits } => {
                let gate = match name.as_str() {
                    "h" => Gate::H(local_of(qubits[0])?),
                    "x" => Gate::X(local_of(qubits[0])?),
                    "z" => Gate::Z(local_of(qubits[0])?),
                    "s" => Gate::S(local_of(qubits[0])?),
                    "cx" => Gate::Cnot {
                        control: local_of(qubits[0])?,
                        target: local_of(qubits[1])?,
                    },
                    other => bail!("unsupported gate {other}"),
                };
                circuit.push(gate);
            }
        }
    }
    if measures.iter().any(|&w| w == usize::MAX) {
        bail!("program does not measure every classical bit");
    }
    Ok((circuit, measures))
}
