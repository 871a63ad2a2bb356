//! The `verify` command: recompute every structural certificate the
//! protocol rests on and report pass/fail per line.

use anyhow::Result;
use rb422_core::code422::{Platform, phased_frame_constants, verify_gate_table};
use rb422_core::gates;
use rb422_core::group::GroupCatalog;

pub struct VerifyReport {
    pub lines: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|(_, ok)| *ok)
    }
}

pub fn run_verification() -> Result<VerifyReport> {
    let mut lines = Vec::new();
    let mut check = |label: String, ok: bool| lines.push((label, ok));

    let realizable = GroupCatalog::generate(gates::code_gate_set(), 2_000)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let real_clifford = GroupCatalog::generate(gates::real_clifford_generators(), 4_000)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let clifford = GroupCatalog::generate(gates::bare_generators(), 20_000)
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    check(format!("realizable group order {} (expect 576)", realizable.order()),
        realizable.order() == 576);
    check(format!("real Clifford group order {} (expect 1152)", real_clifford.order()),
        real_clifford.order() == 1_152);
    check(format!("Clifford group order {} (expect 11520)", clifford.order()),
        clifford.order() == 11_520);
    check("subset chain realizable < real Clifford < Clifford".to_string(),
        realizable.is_subset_of(&real_clifford) && real_clifford.is_subset_of(&clifford));

    let fp_r = realizable.frame_potential().map_err(|e| anyhow::anyhow!("{e}"))?;
    check(format!("frame potential of realizable group {fp_r:.12} (expect 3)"),
        (fp_r - 3.0).abs() < 1e-9);
    let fp_c = clifford.frame_potential().map_err(|e| anyhow::anyhow!("{e}"))?;
    check(format!("frame potential of Clifford group {fp_c:.12} (expect 2)"),
        (fp_c - 2.0).abs() < 1e-9);

    let mean_r = realizable.mean_word_length();
    check(format!("mean code-gate word length {mean_r:.4} (expect in (4,5))"),
        mean_r > 4.0 && mean_r < 5.0);
    let mean_c = clifford.mean_word_length();
    check(format!("mean elementary word length {mean_c:.4} (expect in (7,8))"),
        mean_c > 7.0 && mean_c < 8.0);

    let table = verify_gate_table();
    for row in table.rows.iter() {
        check(format!("gate table row {} (deviation {:.2e})", row.name, row.max_deviation),
            row.passed);
    }

    for platform in [Platform::Logical422, Platform::Bare2q] {
        let constants = phased_frame_constants(platform).map_err(|e| anyhow::anyhow!("{e}"))?;
        let label = match platform {
            Platform::Logical422 => "encoded",
            Platform::Bare2q => "bare",
        };
        check(
            format!(
                "{label} phased frame constants A={:.4} B={:.4} C={:.4} (expect 0.25, 0.25, 0.5)",
                constants.asymptote, constants.b_amplitude, constants.c_amplitude
            ),
            (constants.asymptote - 0.25).abs() < 1e-12
                && (constants.b_amplitude - 0.25).abs() < 1e-12
                && (constants.c_amplitude - 0.5).abs() < 1e-12,
        );
    }

    Ok(VerifyReport { lines })
}
