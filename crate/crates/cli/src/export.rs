//! Batch QASM export: one program per sequence plus a manifest.

use crate::config::ExperimentConfig;
use crate::qasm::emit_qasm;
use crate::runner::Catalogs;
use crate::topology::DeviceTopology;
use anyhow::{Context, Result, anyhow};
use std::fmt::Write as _;
use std::path::Path;

pub fn sequence_file_stem(m: usize, replicate: usize) -> String {
    format!("seq_m{m:03}_r{replicate:03}")
}

/// Write one `.qasm` file per sequence into `out_dir`, plus `manifest.txt`
/// describing each file (length, replicate, compiled Pauli, target bits,
/// final relabel frame). Returns the number of programs written.
pub fn export_qasm(config: &ExperimentConfig, out_dir: &Path) -> Result<usize> {
    let catalogs = Catalogs::build()?;
    export_qasm_with(config, out_dir, &catalogs)
}

pub fn export_qasm_with(
    config: &ExperimentConfig,
    out_dir: &Path,
    catalogs: &Catalogs,
) -> Result<usize> {
    let rb = config.rb_config()?;
    let ctx = catalogs.context(rb.prep_mode);
    let topo = DeviceTopology::default();
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let mut manifest = String::from("# file m replicate pauli target_bits final_frame\n");
    let mut count = 0usize;
    for m in rb.schedule.lengths() {
        for replicate in 0..rb.sequences_per_length {
            let (seq, realized) = rb422_core::rb::regenerate_sequence(&rb, &ctx, m, replicate)
                .map_err(|e| anyhow!("sequence m={m} r={replicate}: {e}"))?;
            let qasm = emit_qasm(&realized, &topo)?;
            let stem = sequence_file_stem(m, replicate);
            std::fs::write(out_dir.join(format!("{stem}.qasm")), qasm)?;
            let frame = realized.final_frame.as_array();
            let _ = writeln!(
                manifest,
                "{stem}.qasm {m} {replicate} {} {}{} {},{},{},{}",
                seq.compiled_pauli.name(),
                u8::from(realized.target_bits[0]),
                u8::from(realized.target_bits[1]),
                frame[0],
                frame[1],
                frame[2],
                frame[3],
            );
            count += 1;
        }
    }
    std::fs::write(out_dir.join("manifest.txt"), manifest)?;
    Ok(count)
}
