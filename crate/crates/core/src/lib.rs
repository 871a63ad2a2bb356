//! Core library for randomized benchmarking of the [4,2,2] error-detecting
//! code against bare two-qubit gates.
//!
//! The crate covers the full computational pipeline:
//!
//! * binary-symplectic Pauli/Clifford algebra and group closure by breadth
//!   first search, with frame-potential certification of orthogonal
//!   2-designs ([`pauli`], [`clifford`], [`group`], [`gates`]);
//! * the [4,2,2] code itself: encoding table, state preparation, virtual
//!   gates, and parity decoding with rejection ([`code422`]);
//! * dense density-matrix simulation of 2-5 qubit circuits under
//!   configurable CPTP noise, including correlated ZZ crosstalk
//!   ([`circuit`], [`channel`], [`noise`], [`sim`], [`twirl`]);
//! * benchmarking sequence generation and execution for the four run types
//!   ([`rb`]);
//! * decay-curve fitting, fidelity extraction, and bootstrap confidence
//!   intervals ([`fit`], [`bootstrap`]).
//!
//! The crate is `no_std` (with `alloc`); file formats, QASM export, and the
//! command-line runner live in the companion `rb422-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod bootstrap;
pub mod channel;
pub mod circuit;
pub mod clifford;
pub mod cmat;
pub mod code422;
pub mod error;
pub mod fit;
pub mod gates;
pub mod group;
pub mod noise;
pub mod pauli;
pub mod rb;
pub mod sim;
pub mod twirl;

pub use clifford::{CliffordElement, CliffordKey};
pub use error::{Error, Result};
pub use group::GroupCatalog;
pub use pauli::PauliOperator;
