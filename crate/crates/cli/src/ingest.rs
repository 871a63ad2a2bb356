//! Count-file ingestion: measured histograms from hardware (or from
//! re-simulated exports) flow into the same survival records and analysis
//! as direct simulation.
//!
//! One count file per exported sequence, named `counts_m{m:03}_r{r:03}.txt`,
//! each line `bitstring count` over the classical register. The bit order
//! is configurable: `c0_first` (default) reads the leftmost character as
//! c[0]; `c0_last` reads the rightmost.

use crate::config::{BitOrder, ExperimentConfig};

use crate::runner::Catalogs;
use anyhow::{Context, Result, anyhow, bail};
use rb422_core::rb::{SurvivalRecord, regenerate_sequence, tally_outcomes};
use std::path::Path;

pub fn counts_file_name(m: usize, replicate: usize) -> String {
    format!("counts_m{m:03}_r{replicate:03}.txt")
}

/// Parse one histogram file into basis-state counts over `n_clbits`
/// classical bits, honoring the configured bit order. The returned vector
/// is indexed with c[0] as the most significant bit.
pub fn parse_counts(text: &str, n_clbits: usize, order: BitOrder) -> Result<Vec<u32>> {
    let mut hist = vec![0u32; 1 << n_clbits];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (bits, count) = line
            .split_once(char::is_whitespace)
            .with_context(|| format!("line {}: expected 'bitstring count'", lineno + 1))?;
        if bits.len() != n_clbits {
            bail!("line {}: expected {} bits, found {:?}", lineno + 1, n_clbits, bits);
        }
        let mut idx = 0usize;
        for (pos, ch) in bits.chars().enumerate() {
            let clbit = match order {
                BitOrder::C0First => pos,
                BitOrder::C0Last => n_clbits - 1 - pos,
            };
            match ch {
                '0' => {}
                '1' => idx |= 1 << (n_clbits - 1 - clbit),
                other => bail!("line {}: bad bit {:?}", lineno + 1, other),
            }
        }
        let count: u32 = count.trim().parse().context("bad count")?;
        hist[idx] = hist[idx]
            .checked_add(count)
            .context("count overflow")?;
    }
    Ok(hist)
}

pub struct IngestOutcome {
    pub records: Vec<SurvivalRecord>,
    /// Non-fatal findings (shot-count mismatches and the like).
    pub warnings: Vec<String>,
}

/// Rebuild the experiment's sequences from the config seed and match each
/// against its count file.
pub fn ingest_counts(config: &ExperimentConfig, counts_dir: &Path) -> Result<IngestOutcome> {
    let catalogs = Catalogs::build()?;
    ingest_counts_with(config, counts_dir, &catalogs)
}

pub fn ingest_counts_with(
    config: &ExperimentConfig,
    counts_dir: &Path,
    catalogs: &Catalogs,
) -> Result<IngestOutcome> {
    let rb = config.rb_config()?;
    let ctx = catalogs.context(rb.prep_mode);
    let order = config.bit_order()?;
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for m in rb.schedule.lengths() {
        for replicate in 0..rb.sequences_per_length {
            let (seq, realized) = regenerate_sequence(&rb, &ctx, m, replicate)
                .map_err(|e| anyhow!("sequence m={m} r={replicate}: {e}"))?;
            let path = counts_dir.join(counts_file_name(m, replicate));
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("missing count file {}", path.display()))?;
            let n_clbits = realized.n_qubits();
            let hist = parse_counts(&text, n_clbits, order)
                .with_context(|| format!("parsing {}", path.display()))?;
            let total: u64 = hist.iter().map(|&c| c as u64).sum();
            if total != rb.shots as u64 {
                warnings.push(format!(
                    "{}: {} shots recorded, config says {}",
                    path.display(),
                    total,
                    rb.shots
                ));
            }
            // Histogram index uses c[i] = wire i, matching the exporter's
            // measurement map. Ingested data has no simulation seed.
            records.push(tally_outcomes(&realized, &hist, m, replicate, seq.compiled_pauli, 0));
        }
    }
    Ok(IngestOutcome { records, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_histograms() {
        // {0000: 1024} decodes to full acceptance and success for target 00.
        let hist = parse_counts("0000 1024\n", 4, BitOrder::C0First).unwrap();
        assert_eq!(hist[0], 1024);
        // {1000: 100, 0000: 924}: odd parity rejects 100 shots.
        let hist = parse_counts("1000 100\n0000 924\n", 4, BitOrder::C0First).unwrap();
        assert_eq!(hist[0b1000], 100);
        assert_eq!(hist[0], 924);
    }

    #[test]
    fn bit_order_round_trip() {
        // The same physical outcome written in both orders lands on the
        // same index after the flag is applied.
        let fwd = parse_counts("0110 7\n", 4, BitOrder::C0First).unwrap();
        let rev = parse_counts("0110 7\n", 4, BitOrder::C0Last).unwrap();
        assert_eq!(fwd[0b0110], 7);
        assert_eq!(rev[0b0110], 7); // palindrome string: same slot
        let fwd = parse_counts("1000 3\n", 4, BitOrder::C0First).unwrap();
        let rev = parse_counts("0001 3\n", 4, BitOrder::C0Last).unwrap();
        assert_eq!(fwd[0b1000], 3);
        assert_eq!(rev[0b1000], 3);
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(parse_counts("01 5\n", 4, BitOrder::C0First).is_err());
        assert!(parse_counts("01a0 5\n", 4, BitOrder::C0First).is_err());
        assert!(parse_counts("0110 x\n", 4, BitOrder::C0First).is_err());
    }
}
