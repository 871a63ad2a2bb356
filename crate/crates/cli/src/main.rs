use anyhow::{Context, Result, bail};
use clap::{Args, Parser, Subcommand};
use rb422_cli::config::ExperimentConfig;
use rb422_cli::results::{load_results, write_results};
use rb422_cli::runner;
use std::path::PathBuf;

/// Randomized benchmarking of the [4,2,2] error-detecting code against
/// bare two-qubit gates: simulation, analysis, and OpenQASM 2.0 export.
#[derive(Parser)]
#[command(name = "rb422", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Override shots per sequence.
    #[arg(long)]
    shots: Option<u32>,
    /// Override sequences per length.
    #[arg(long)]
    sequences: Option<usize>,
    /// Override the run type.
    #[arg(long)]
    run_type: Option<String>,
}

impl ConfigArgs {
    /// Command-line flags take precedence over config-file values.
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.experiment.seed = seed;
        }
        if let Some(shots) = self.shots {
            config.experiment.shots = shots;
        }
        if let Some(sequences) = self.sequences {
            config.experiment.sequences_per_length = sequences;
        }
        if let Some(run_type) = self.run_type.as_ref() {
            config.experiment.run_type = run_type.clone();
        }
        // Revalidate after overrides.
        ExperimentConfig::parse(&config.to_toml())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the structural certificates: group orders, the 2-design
    /// frame potential, word-length statistics, the encoding table, and
    /// the phased-frame constants.
    Verify,
    /// Simulate one configured run and write a results file.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Results file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit results files: a standard run alone, or a standard + phased
    /// pair for a full two-exponential fidelity estimate.
    Fit {
        /// Results file from a standard run.
        #[arg(long)]
        standard: PathBuf,
        /// Results file from the paired phased run.
        #[arg(long)]
        phased: Option<PathBuf>,
        /// Bootstrap resamples for the confidence interval.
        #[arg(long, default_value_t = 9_999)]
        resamples: usize,
        /// Bootstrap seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Optional output file for the estimate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bootstrap confidence interval only.
    Bootstrap {
        #[arg(long)]
        standard: PathBuf,
        #[arg(long)]
        phased: Option<PathBuf>,
        #[arg(long, default_value_t = 9_999)]
        resamples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Export every sequence of a configured run as OpenQASM 2.0.
    ExportQasm {
        #[command(flatten)]
        config: ConfigArgs,
        /// Directory for the .qasm files and manifest.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Ingest measured count files for a configured run and write a
    /// results file.
    Ingest {
        #[command(flatten)]
        config: ConfigArgs,
        /// Directory holding counts_m###_r###.txt files.
        #[arg(long)]
        counts_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit per-length CSV plot data from a results file.
    PlotData {
        #[arg(long)]
        results: PathBuf,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify => {
            let report = rb422_cli::verify::run_verification()?;
            for (line, ok) in report.lines.iter() {
                println!("{} {line}", if *ok { "PASS" } else { "FAIL" });
            }
            if !report.all_passed() {
                bail!("verification failed");
            }
        }
        Command::Run { config, out } => {
            let config = config.load()?;
            let results = runner::run_experiment(&config)?;
            write_results(&results, &out)?;
            if let Some(est) = results.estimate.as_ref() {
                println!(
                    "{}: infidelity {:.5} (95% CI {:.5}..{:.5}){}",
                    config.experiment.run_type,
                    est.infidelity,
                    est.ci_low,
                    est.ci_high,
                    if est.c_assumed_equal_b { " [c taken equal to b]" } else { "" }
                );
            } else {
                println!(
                    "{}: wrote {} records (pair with a standard run via `rb422 fit`)",
                    config.experiment.run_type,
                    results.records.len()
                );
            }
            println!("results written to {}", out.display());
        }
        Command::Fit { standard, phased, resamples, seed, out } => {
            let standard_results = load_results(&standard)?;
            let phased_results = phased.as_ref().map(|p| load_results(p)).transpose()?;
            let analysis = runner::paired_analysis(
                &standard_results,
                phased_results.as_ref(),
                resamples,
                seed,
            )?;
            let est = &analysis.estimate;
            let mut text = String::new();
            text.push_str("rb422-fit v1\n");
            text.push_str(&format!("b {}\n", est.b));
            text.push_str(&format!("c {}\n", est.c));
            text.push_str(&format!("c_assumed_equal_b {}\n", est.c_assumed_equal_b));
            text.push_str(&format!(
                "phased_used_full_model {}\n",
                analysis.phased_used_full_model
            ));
            text.push_str(&format!("fidelity {}\n", est.fidelity));
            text.push_str(&format!("infidelity {}\n", est.infidelity));
            text.push_str(&format!("ci_low {}\n", est.ci_low));
            text.push_str(&format!("ci_high {}\n", est.ci_high));
            text.push_str(&format!("resamples {}\n", est.resamples));
            print!("{text}");
            if let Some(path) = out {
                std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Bootstrap { standard, phased, resamples, seed } => {
            let standard_results = load_results(&standard)?;
            let phased_results = phased.as_ref().map(|p| load_results(p)).transpose()?;
            let analysis = runner::paired_analysis(
                &standard_results,
                phased_results.as_ref(),
                resamples,
                seed,
            )?;
            println!(
                "infidelity {:.6}; 95% bootstrap CI [{:.6}, {:.6}] from {} resamples",
                analysis.estimate.infidelity,
                analysis.estimate.ci_low,
                analysis.estimate.ci_high,
                analysis.estimate.resamples
            );
        }
        Command::ExportQasm { config, out_dir } => {
            let config = config.load()?;
            let count = rb422_cli::export::export_qasm(&config, &out_dir)?;
            println!("wrote {count} programs to {}", out_dir.display());
        }
        Command::Ingest { config, counts_dir, out } => {
            let config = config.load()?;
            let outcome = rb422_cli::ingest::ingest_counts(&config, &counts_dir)?;
            for w in outcome.warnings.iter() {
                eprintln!("warning: {w}");
            }
            let results = assemble_ingested(rb422_cli::results::ExperimentResults {
                config,
                records: outcome.records,
                fit: None,
                no_postselection: None,
                estimate: None,
            })?;
            write_results(&results, &out)?;
            println!("results written to {}", out.display());
        }
        Command::PlotData { results, out } => {
            let results = load_results(&results)?;
            rb422_cli::plotdata::write_plot_data(&results, &out)?;
            println!("plot data written to {}", out.display());
        }
    }
    Ok(())
}

/// Attach fits to ingested records (same policy as the runner; the
/// bootstrap interval comes from the `fit` command on demand).
fn assemble_ingested(
    mut results: rb422_cli::results::ExperimentResults,
) -> Result<rb422_cli::results::ExperimentResults> {
    use rb422_core::fit::{DecayModel, fit_decay};
    let run_type = results.config.run_type()?;
    let points = runner::fit_points(&results.records);
    let model = if run_type.is_phased() { DecayModel::ReducedC } else { DecayModel::ReducedB };
    if let Ok(fit) = fit_decay(&points, model) {
        results.fit = Some(rb422_cli::results::FitSummary::from_fit(&fit, false));
    }
    if run_type.platform() == rb422_core::code422::Platform::Logical422 && !run_type.is_phased() {
        let nops: Vec<rb422_core::fit::FitPoint> =
            rb422_core::rb::estimate_survival_no_postselection(&results.records)
                .points
                .iter()
                .map(|p| rb422_core::fit::FitPoint {
                    m: p.m,
                    q: p.q_bar,
                    weight: p.total_shots as f64,
                })
                .collect();
        if let Ok(fit) = fit_decay(&nops, DecayModel::ReducedB) {
            results.no_postselection = Some(rb422_cli::results::FitSummary::from_fit(&fit, true));
        }
    }
    Ok(results)
}
