//! Named Clifford generators and the generator sets used throughout.
//!
//! Generator-set ordering is part of the deterministic contract: breadth
//! first search stores the lexicographically first minimal word, so the
//! orders below are fixed and documented here.

use crate::clifford::CliffordElement;
use crate::pauli::{PauliKind, PauliOperator};
use alloc::string::String;
use alloc::vec::Vec;

/// A generator with a stable display name.
#[derive(Clone, Debug)]
pub struct NamedGenerator {
    pub name: String,
    pub element: CliffordElement,
}

impl NamedGenerator {
    fn new(name: &str, element: CliffordElement) -> Self {
        Self { name: String::from(name), element }
    }
}

fn x_img(n: usize, j: usize) -> PauliOperator {
    PauliOperator::single(n, j, PauliKind::X)
}

fn z_img(n: usize, j: usize) -> PauliOperator {
    PauliOperator::single(n, j, PauliKind::Z)
}

fn from_maps(
    n: usize,
    fx: impl Fn(usize) -> PauliOperator,
    fz: impl Fn(usize) -> PauliOperator,
) -> CliffordElement {
    let xs: Vec<_> = (0..n).map(&fx).collect();
    let zs: Vec<_> = (0..n).map(&fz).collect();
    CliffordElement::from_images(n, xs, zs).expect("generator tableau is valid")
}

/// Pauli X on `q`: fixes X images, negates Z_q.
pub fn pauli_x(n: usize, q: usize) -> CliffordElement {
    from_maps(
        n,
        |j| x_img(n, j),
        |j| if j == q { z_img(n, j).negate() } else { z_img(n, j) },
    )
}

/// Pauli Z on `q`: negates X_q.
pub fn pauli_z(n: usize, q: usize) -> CliffordElement {
    from_maps(
        n,
        |j| if j == q { x_img(n, j).negate() } else { x_img(n, j) },
        |j| z_img(n, j),
    )
}

/// Hadamard on `q`: X_q <-> Z_q.
pub fn hadamard(n: usize, q: usize) -> CliffordElement {
    from_maps(
        n,
        |j| if j == q { z_img(n, j) } else { x_img(n, j) },
        |j| if j == q { x_img(n, j) } else { z_img(n, j) },
    )
}

/// Phase gate diag(1, i) on `q`: X_q -> Y_q.
pub fn phase_gate(n: usize, q: usize) -> CliffordElement {
    from_maps(
        n,
        |j| if j == q { PauliOperator::single(n, j, PauliKind::Y) } else { x_img(n, j) },
        |j| z_img(n, j),
    )
}

/// CNOT with control `c`, target `t`.
pub fn cnot(n: usize, c: usize, t: usize) -> CliffordElement {
    assert_ne!(c, t);
    from_maps(
        n,
        |j| if j == c { x_img(n, c).mul(&x_img(n, t)) } else { x_img(n, j) },
        |j| if j == t { z_img(n, c).mul(&z_img(n, t)) } else { z_img(n, j) },
    )
}

/// Controlled-Z on the pair (symmetric).
pub fn cz(n: usize, a: usize, b: usize) -> CliffordElement {
    assert_ne!(a, b);
    from_maps(
        n,
        |j| {
            if j == a {
                x_img(n, a).mul(&z_img(n, b))
            } else if j == b {
                x_img(n, b).mul(&z_img(n, a))
            } else {
                x_img(n, j)
            }
        },
        |j| z_img(n, j),
    )
}

/// SWAP of two qubits.
pub fn swap(n: usize, a: usize, b: usize) -> CliffordElement {
    let relabel = |j: usize| if j == a { b } else if j == b { a } else { j };
    from_maps(n, |j| x_img(n, relabel(j)), |j| z_img(n, relabel(j)))
}

/// The two-qubit logical gate set realizable transversally (or virtually)
/// in the [4,2,2] code, in its canonical order:
///
/// index 0: X (x) I        (transversal X on physical 1,3)
/// index 1: I (x) X        (transversal X on physical 1,2)
/// index 2: Z (x) I        (transversal Z on physical 1,2)
/// index 3: I (x) Z        (transversal Z on physical 1,3)
/// index 4: SWAP.(H (x) H) (transversal Hadamard)
/// index 5: (Z (x) Z).CZ   (transversal phase gate)
/// index 6: CNOT12         (virtual relabeling, physical SWAP of 1,2)
/// index 7: CNOT21         (virtual relabeling, physical SWAP of 1,3)
pub fn code_gate_set() -> Vec<NamedGenerator> {
    let n = 2;
    let hh = hadamard(n, 0).compose(&hadamard(n, 1)).expect("same n");
    let swap_hh = swap(n, 0, 1).compose(&hh).expect("same n");
    let zz = pauli_z(n, 0).compose(&pauli_z(n, 1)).expect("same n");
    let zz_cz = zz.compose(&cz(n, 0, 1)).expect("same n");
    alloc::vec![
        NamedGenerator::new("XI", pauli_x(n, 0)),
        NamedGenerator::new("IX", pauli_x(n, 1)),
        NamedGenerator::new("ZI", pauli_z(n, 0)),
        NamedGenerator::new("IZ", pauli_z(n, 1)),
        NamedGenerator::new("SWAP.HH", swap_hh),
        NamedGenerator::new("ZZ.CZ", zz_cz),
        NamedGenerator::new("CNOT12", cnot(n, 0, 1)),
        NamedGenerator::new("CNOT21", cnot(n, 1, 0)),
    ]
}

/// Elementary two-qubit generators {X, Z, H, P on each qubit, CNOT12}: the
/// set whose closure is the full two-qubit Clifford group, and the gate
/// vocabulary used for bare-qubit word decompositions.
pub fn bare_generators() -> Vec<NamedGenerator> {
    let n = 2;
    alloc::vec![
        NamedGenerator::new("x1", pauli_x(n, 0)),
        NamedGenerator::new("x2", pauli_x(n, 1)),
        NamedGenerator::new("z1", pauli_z(n, 0)),
        NamedGenerator::new("z2", pauli_z(n, 1)),
        NamedGenerator::new("h1", hadamard(n, 0)),
        NamedGenerator::new("h2", hadamard(n, 1)),
        NamedGenerator::new("s1", phase_gate(n, 0)),
        NamedGenerator::new("s2", phase_gate(n, 1)),
        NamedGenerator::new("cx12", cnot(n, 0, 1)),
    ]
}

/// Real (orthogonal-representation) Clifford generators on two qubits.
pub fn real_clifford_generators() -> Vec<NamedGenerator> {
    let n = 2;
    alloc::vec![
        NamedGenerator::new("x1", pauli_x(n, 0)),
        NamedGenerator::new("x2", pauli_x(n, 1)),
        NamedGenerator::new("z1", pauli_z(n, 0)),
        NamedGenerator::new("z2", pauli_z(n, 1)),
        NamedGenerator::new("h1", hadamard(n, 0)),
        NamedGenerator::new("h2", hadamard(n, 1)),
        NamedGenerator::new("cz", cz(n, 0, 1)),
        NamedGenerator::new("cx12", cnot(n, 0, 1)),
        NamedGenerator::new("cx21", cnot(n, 1, 0)),
    ]
}

/// Single-qubit Pauli generators, used in frame-potential spot checks.
pub fn single_qubit_paulis() -> Vec<NamedGenerator> {
    alloc::vec![
        NamedGenerator::new("x", pauli_x(1, 0)),
        NamedGenerator::new("z", pauli_z(1, 0)),
    ]
}
