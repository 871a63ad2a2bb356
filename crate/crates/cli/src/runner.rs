//! Experiment orchestration: simulate a configured run, fit it, bootstrap
//! it, and assemble the results payload. Sequence cells carry their own
//! derived seeds, so the rayon fan-out below reproduces the sequential
//! results exactly.

use crate::config::ExperimentConfig;
use crate::results::{ExperimentResults, FidelityEstimate, FitSummary};
use anyhow::{Result, anyhow, bail};
use rayon::prelude::*;
use rb422_core::bootstrap::{BootstrapPlan, percentile_ci, sequence_stats};
use rb422_core::code422::Platform;
use rb422_core::fit::{DecayModel, FitPoint, fidelity_from_params, fit_decay, fit_phased};
use rb422_core::gates;
use rb422_core::group::GroupCatalog;
use rb422_core::rb::{
    RealizeContext, RunType, SurvivalRecord, derive_seed, estimate_survival,
    estimate_survival_no_postselection, simulate_one,
};

/// The two catalogs every command needs: the realizable group with its
/// code-gate-set words, and the elementary-gate closure (the full Clifford
/// group) for bare-platform words.
pub struct Catalogs {
    pub realizable: GroupCatalog,
    pub elementary: GroupCatalog,
}

impl Catalogs {
    pub fn build() -> Result<Self> {
        let realizable = GroupCatalog::generate(gates::code_gate_set(), 1_000)
            .map_err(|e| anyhow!("realizable group: {e}"))?;
        let elementary = GroupCatalog::generate(gates::bare_generators(), 12_000)
            .map_err(|e| anyhow!("elementary closure: {e}"))?;
        Ok(Self { realizable, elementary })
    }

    pub fn context(&self, prep_mode: rb422_core::code422::PrepMode) -> RealizeContext<'_> {
        RealizeContext {
            realizable: &self.realizable,
            elementary: Some(&self.elementary),
            prep_mode,
        }
    }
}

pub fn fit_points(records: &[SurvivalRecord]) -> Vec<FitPoint> {
    estimate_survival(records)
        .points
        .iter()
        .map(|p| FitPoint { m: p.m, q: p.q_bar, weight: p.accepted as f64 })
        .collect()
}

/// Simulate every sequence of the configured run.
pub fn simulate_records(
    config: &ExperimentConfig,
    catalogs: &Catalogs,
) -> Result<Vec<SurvivalRecord>> {
    let rb = config.rb_config()?;
    let model = config.noise_model()?;
    let ctx = catalogs.context(rb.prep_mode);
    let cells: Vec<(usize, usize)> = rb
        .schedule
        .lengths()
        .into_iter()
        .flat_map(|m| (0..rb.sequences_per_length).map(move |r| (m, r)))
        .collect();
    let records: Vec<SurvivalRecord> = cells
        .par_iter()
        .map(|&(m, replicate)| {
            simulate_one(&rb, &ctx, &model, m, replicate)
                .map_err(|e| anyhow!("sequence m={m} r={replicate}: {e}"))
        })
        .collect::<Result<_>>()?;
    Ok(records)
}

/// Run one configured experiment end to end.
///
/// Standard runs get a reduced-b fit and a fidelity estimate with `c`
/// taken equal to `b` (flagged as such) plus a bootstrap interval. Phased
/// runs get a standalone reduced-c fit; their full estimate comes from
/// pairing with a standard results file through the `fit` command.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResults> {
    let catalogs = Catalogs::build()?;
    run_experiment_with(config, &catalogs)
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    catalogs: &Catalogs,
) -> Result<ExperimentResults> {
    let rb = config.rb_config()?;
    let records = simulate_records(config, catalogs)?;
    let points = fit_points(&records);
    let run_type = rb.run_type;
    let post_selected = run_type.platform() == Platform::Logical422;

    let mut results = ExperimentResults {
        config: config.clone(),
        records,
        fit: None,
        no_postselection: None,
        estimate: None,
    };

    if run_type.is_phased() {
        let fit = fit_decay(&points, DecayModel::ReducedC)
            .map_err(|e| anyhow!("phased reduced fit: {e}"))?;
        results.fit = Some(FitSummary::from_fit(&fit, false));
    } else {
        let fit = fit_decay(&points, DecayModel::ReducedB)
            .map_err(|e| anyhow!("standard fit: {e}"))?;
        let b = fit.base_b.clamp(-1.0, 1.0);
        results.fit = Some(FitSummary::from_fit(&fit, false));

        let stats = sequence_stats(&results.records, post_selected);
        let resamples = config.analysis.bootstrap_resamples;
        let boot_seed = derive_seed(rb.seed, &[0xc1]);
        let plan = BootstrapPlan::new(&stats, None).map_err(|e| anyhow!("bootstrap: {e}"))?;
        let values: Vec<f64> = (0..resamples as u64)
            .into_par_iter()
            .map(|r| plan.resample_infidelity(boot_seed, r))
            .collect();
        let ci = percentile_ci(values, resamples).map_err(|e| anyhow!("bootstrap: {e}"))?;
        let fidelity = fidelity_from_params(b, b).map_err(|e| anyhow!("{e}"))?;
        results.estimate = Some(FidelityEstimate {
            b,
            c: b,
            c_assumed_equal_b: true,
            fidelity,
            infidelity: 1.0 - fidelity,
            ci_low: ci.ci_low,
            ci_high: ci.ci_high,
            resamples: ci.resamples,
        });
    }

    // The uncorrected all-shots view of encoded runs (rejections counted
    // as failures): an approximate fit by construction.
    if post_selected && !run_type.is_phased() {
        let nops_points: Vec<FitPoint> = estimate_survival_no_postselection(&results.records)
            .points
            .iter()
            .map(|p| FitPoint { m: p.m, q: p.q_bar, weight: p.total_shots as f64 })
            .collect();
        if let Ok(fit) = fit_decay(&nops_points, DecayModel::ReducedB) {
            results.no_postselection = Some(FitSummary::from_fit(&fit, true));
        }
    }
    Ok(results)
}

/// Paired standard + phased analysis: `b` from the standard run, `c` from
/// the phased run (model-selected), joint bootstrap for the infidelity
/// interval.
pub struct PairedAnalysis {
    pub standard_fit: FitSummary,
    pub phased_fit: Option<FitSummary>,
    pub phased_used_full_model: bool,
    pub estimate: FidelityEstimate,
}

pub fn paired_analysis(
    standard: &ExperimentResults,
    phased: Option<&ExperimentResults>,
    resamples: usize,
    seed: u64,
) -> Result<PairedAnalysis> {
    let std_type = standard.config.run_type()?;
    if std_type.is_phased() {
        bail!("--standard results must come from a standard run");
    }
    let post_selected = std_type.platform() == Platform::Logical422;
    let std_points = fit_points(&standard.records);
    let std_fit = fit_decay(&std_points, DecayModel::ReducedB)
        .map_err(|e| anyhow!("standard fit: {e}"))?;
    let b = std_fit.base_b.clamp(-1.0, 1.0);

    let mut phased_fit = None;
    let mut used_full = false;
    let c = match phased {
        None => b,
        Some(ph) => {
            let ph_type = ph.config.run_type()?;
            if !ph_type.is_phased() {
                bail!("--phased results must come from a phased run");
            }
            if ph_type.platform() != std_type.platform() {
                bail!("paired runs must share a platform");
            }
            let points = fit_points(&ph.records);
            let fit = fit_phased(&points, b).map_err(|e| anyhow!("phased fit: {e}"))?;
            used_full = fit.used_full;
            phased_fit = Some(FitSummary::from_fit(fit.chosen(), false));
            fit.chosen().base_c.clamp(-1.0, 1.0)
        }
    };

    let std_stats = sequence_stats(&standard.records, post_selected);
    let phased_stats = phased.map(|ph| sequence_stats(&ph.records, post_selected));
    let plan = BootstrapPlan::new(&std_stats, phased_stats.as_deref())
        .map_err(|e| anyhow!("bootstrap: {e}"))?;
    let values: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|r| plan.resample_infidelity(seed, r))
        .collect();
    let ci = percentile_ci(values, resamples).map_err(|e| anyhow!("bootstrap: {e}"))?;

    let fidelity = fidelity_from_params(b, c).map_err(|e| anyhow!("{e}"))?;
    Ok(PairedAnalysis {
        standard_fit: FitSummary::from_fit(&std_fit, false),
        phased_fit,
        phased_used_full_model: used_full,
        estimate: FidelityEstimate {
            b,
            c,
            c_assumed_equal_b: phased.is_none(),
            fidelity,
            infidelity: 1.0 - fidelity,
            ci_low: ci.ci_low,
            ci_high: ci.ci_high,
            resamples: ci.resamples,
        },
    })
}

/// Run the standard + phased pair for one platform and return the joint
/// analysis; the workhorse behind full fidelity estimates.
pub fn run_paired(
    standard_config: &ExperimentConfig,
    phased_config: &ExperimentConfig,
    catalogs: &Catalogs,
) -> Result<(ExperimentResults, ExperimentResults, PairedAnalysis)> {
    let standard = run_experiment_with(standard_config, catalogs)?;
    let phased = run_experiment_with(phased_config, catalogs)?;
    let seed = derive_seed(standard_config.rb_config()?.seed, &[0xc2]);
    let analysis = paired_analysis(
        &standard,
        Some(&phased),
        standard_config.analysis.bootstrap_resamples,
        seed,
    )?;
    Ok((standard, phased, analysis))
}

/// Convenience: clone a config, switching the run type.
pub fn with_run_type(config: &ExperimentConfig, run_type: RunType) -> ExperimentConfig {
    let mut out = config.clone();
    out.experiment.run_type = run_type.name().to_string();
    out
}
