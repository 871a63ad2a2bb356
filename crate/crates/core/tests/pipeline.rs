//! End-to-end core pipeline checks: simulated runs must invert to the
//! twirl-oracle decay parameters, compiled-Pauli averaging must pin the
//! asymptote, and the bootstrap must cover the truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rb422_core::bootstrap::{bootstrap_ci, sequence_stats};
use rb422_core::code422::PrepMode;
use rb422_core::fit::{fit_phased, 
    ASYMPTOTE, DecayModel, FitPoint, fit_decay, fit_free_asymptote,
};
use rb422_core::gates;
use rb422_core::group::GroupCatalog;
use rb422_core::noise::{ChannelSpec, MeasureFlips, NoiseModel};
use rb422_core::rb::{
    LengthSchedule, RbRunConfig, RealizeContext, RunType, estimate_survival, simulate_run,
};
use rb422_core::twirl::twirl_decay_params;

fn fit_points(est: &rb422_core::rb::SurvivalEstimate) -> Vec<FitPoint> {
    est.points
        .iter()
        .map(|p| FitPoint { m: p.m, q: p.q_bar, weight: p.accepted as f64 })
        .collect()
}

#[test]
fn pipeline_inverts_twirl_oracle_for_generic_channel() {
    // Per-element phase-flip noise on both wires separates the two decay
    // sectors; the simulated standard run must recover b and the phased run
    // c, each within three standard errors of the exact twirl values.
    let realizable = GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap();
    let elementary = GroupCatalog::generate(gates::bare_generators(), 12_000).unwrap();
    let p = 0.03;
    let mut model = NoiseModel::noiseless();
    model.element = ChannelSpec::PhaseFlip { p };

    let oracle_channel = ChannelSpec::PhaseFlip { p }.realize(2, &[0, 1]).unwrap().unwrap();
    let oracle = twirl_decay_params(&realizable, &oracle_channel).unwrap();
    // The two sectors really differ for this channel.
    assert!((oracle.b - oracle.c).abs() > 0.02);

    let ctx = RealizeContext {
        realizable: &realizable,
        elementary: Some(&elementary),
        prep_mode: PrepMode::Plain,
    };
    let schedule = LengthSchedule::default();

    let mut config = RbRunConfig::new(RunType::PhysicalStandard, 2024);
    config.schedule = schedule;
    let records = simulate_run(&config, &ctx, &model).unwrap();
    let std_fit = fit_decay(&fit_points(&estimate_survival(&records)), DecayModel::ReducedB)
        .unwrap();
    assert!(
        (std_fit.base_b - oracle.b).abs() < 3.0 * std_fit.se_base_b,
        "b = {} +- {} vs oracle {}",
        std_fit.base_b,
        std_fit.se_base_b,
        oracle.b
    );

    let mut config = RbRunConfig::new(RunType::PhysicalPhased, 2024);
    config.schedule = schedule;
    let records = simulate_run(&config, &ctx, &model).unwrap();
    let phased = fit_phased(&fit_points(&estimate_survival(&records)), std_fit.base_b).unwrap();
    assert!(phased.used_full, "split sectors should select the full model");
    let fit = phased.chosen();
    assert!(
        (fit.base_c - oracle.c).abs() < 3.0 * fit.se_base_c,
        "c = {} +- {} vs oracle {}",
        fit.base_c,
        fit.se_base_c,
        oracle.c
    );
}

#[test]
fn compiled_pauli_averaging_pins_asymptote() {
    // Asymmetric measurement flips would pull a fixed-effect asymptote to
    // (1 - p01 + p10)^2 / 4 = 0.219; compiling random Paulis in and
    // averaging restores 1/4.
    let realizable = GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap();
    let elementary = GroupCatalog::generate(gates::bare_generators(), 12_000).unwrap();
    let mut model = NoiseModel::noiseless();
    model.element = ChannelSpec::Depolarizing { p: 0.06 };
    model.measure_flips = vec![MeasureFlips { p01: 0.08, p10: 0.015 }; 2];

    let ctx = RealizeContext {
        realizable: &realizable,
        elementary: Some(&elementary),
        prep_mode: PrepMode::Plain,
    };
    let mut config = RbRunConfig::new(RunType::PhysicalStandard, 77);
    config.schedule = LengthSchedule { start: 2, step: 3, end: 62 };
    let records = simulate_run(&config, &ctx, &model).unwrap();
    let points = fit_points(&estimate_survival(&records));
    let (a, _amp, base) = fit_free_asymptote(&points).unwrap();
    assert!((a - ASYMPTOTE).abs() < 0.015, "fitted asymptote {a}");
    assert!(base > 0.9 && base < 1.0);
}

#[test]
fn bootstrap_covers_known_infidelity() {
    // 200 synthetic experiments at known b (c = b): the 95% interval must
    // contain the true infidelity at least 90% of the time.
    let b_true = 0.95f64;
    let infidelity_true = 0.75 * (1.0 - b_true);
    let lengths: Vec<usize> = (0..31).map(|i| 2 + 3 * i).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(600);
    let mut covered = 0;
    let experiments = 200;
    for _ in 0..experiments {
        let mut records = Vec::new();
        for &m in lengths.iter() {
            let q = 0.25 + 0.75 * b_true.powi(m as i32);
            for replicate in 0..36 {
                let mut successes = 0u32;
                for _ in 0..1024 {
                    if rng.gen::<f64>() < q {
                        successes += 1;
                    }
                }
                records.push(rb422_core::rb::SurvivalRecord {
                    m,
                    replicate,
                    compiled_pauli: rb422_core::rb::CompiledPauli::II,
                    total_shots: 1024,
                    ancilla_rejected: 0,
                    accepted: 1024,
                    successes,
                    seed: 0,
                });
            }
        }
        let stats = sequence_stats(&records, true);
        let seed = rng.gen();
        let ci = bootstrap_ci(&stats, None, 499, seed).unwrap();
        if ci.ci_low <= infidelity_true && infidelity_true <= ci.ci_high {
            covered += 1;
        }
    }
    assert!(
        covered * 100 >= experiments * 90,
        "coverage {covered}/{experiments}"
    );
}
