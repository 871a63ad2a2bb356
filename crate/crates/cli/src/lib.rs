//! IO, file formats, OpenQASM 2.0 export, and the experiment runner for
//! the benchmarking core in `rb422-core`.

pub mod config;
pub mod export;
pub mod ingest;
pub mod plotdata;
pub mod qasm;
pub mod results;
pub mod runner;
pub mod topology;
pub mod verify;
