//! Sixteen-qubit device topology with directed CNOT edges, matching the
//! QX5-style layout the experiment targets, plus the role map tying code
//! wires to device qubits and a CNOT router for the directed constraints.

use anyhow::{anyhow, Result};

/// Directed CNOT edges (control, target).
pub const EDGES: [(u8, u8); 22] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (5, 4),
    (6, 5),
    (6, 7),
    (8, 7),
    (9, 10),
    (11, 10),
    (12, 11),
    (12, 13),
    (13, 14),
    (15, 14),
    (15, 0),
    (1, 0),
    (15, 2),
    (3, 14),
    (13, 4),
    (12, 5),
    (6, 11),
    (7, 10),
    (9, 8),
];

pub const QUBIT_COUNT: usize = 16;

/// Device qubits carrying the four code wires q1..q4.
pub const DATA_QUBITS: [u8; 4] = [5, 12, 13, 14];

/// Device qubit carrying the preparation ancilla.
pub const ANCILLA_QUBIT: u8 = 4;

/// Device qubits carrying the bare two-qubit platform (wire 0, wire 1).
pub const BARE_QUBITS: [u8; 2] = [12, 5];

#[derive(Clone, Debug)]
pub struct DeviceTopology {
    edges: Vec<(u8, u8)>,
}

impl Default for DeviceTopology {
    fn default() -> Self {
        Self { edges: EDGES.to_vec() }
    }
}

/// One device-level operation produced by the router.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RoutedGate {
    H(u8),
    Cx(u8, u8),
}

impl DeviceTopology {
    pub fn has_edge(&self, control: u8, target: u8) -> bool {
        self.edges.iter().any(|&(c, t)| c == control && t == target)
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    /// Realize CNOT control -> target on the directed graph: directly on an
    /// edge, with four Hadamards when only the reverse edge exists, or via a
    /// midpoint using `CNOT_ct = CNOT_kt CNOT_ck CNOT_kt CNOT_ck` with each
    /// leg routed. Midpoints in `preferred` are tried first so circuits
    /// stay on the wires the experiment already owns.
    pub fn route_cnot_preferring(
        &self,
        control: u8,
        target: u8,
        preferred: &[u8],
    ) -> Result<Vec<RoutedGate>> {
        if let Some(direct) = self.route_one_hop(control, target) {
            return Ok(direct);
        }
        let candidates = preferred
            .iter()
            .copied()
            .chain(0..QUBIT_COUNT as u8);
        for k in candidates {
            if k == control || k == target {
                continue;
            }
            let (Some(leg_ck), Some(leg_kt)) =
                (self.route_one_hop(control, k), self.route_one_hop(k, target))
            else {
                continue;
            };
            let mut out = Vec::new();
            for _ in 0..2 {
                out.extend_from_slice(&leg_ck);
                out.extend_from_slice(&leg_kt);
            }
            return Ok(out);
        }
        Err(anyhow!("no route for cnot {control} -> {target}"))
    }

    pub fn route_cnot(&self, control: u8, target: u8) -> Result<Vec<RoutedGate>> {
        self.route_cnot_preferring(control, target, &[])
    }

    fn route_one_hop(&self, control: u8, target: u8) -> Option<Vec<RoutedGate>> {
        if self.has_edge(control, target) {
            return Some(vec![RoutedGate::Cx(control, target)]);
        }
        if self.has_edge(target, control) {
            return Some(vec![
                RoutedGate::H(control),
                RoutedGate::H(target),
                RoutedGate::Cx(target, control),
                RoutedGate::H(control),
                RoutedGate::H(target),
            ]);
        }
        None
    }
}
