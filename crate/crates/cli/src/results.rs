//! Line-structured, versioned results files.
//!
//! The payload embeds the config (exact TOML), the per-sequence records,
//! the pooled survival table, fits, and the fidelity estimate. Floats are
//! written with Rust's shortest round-trip formatting, so identical runs
//! produce byte-identical files and parse back exactly.

use crate::config::ExperimentConfig;
use anyhow::{Context, Result, bail};
use rb422_core::fit::{DecayFit, DecayModel};
use rb422_core::rb::{CompiledPauli, SurvivalRecord, estimate_survival};
use std::fmt::Write as _;

pub const FORMAT_HEADER: &str = "rb422-results v1";

/// Slim, serializable view of a decay fit.
#[derive(Clone, Debug, PartialEq)]
pub struct FitSummary {
    pub model: String,
    pub b_fixed: Option<f64>,
    pub amp_b: f64,
    pub base_b: f64,
    pub amp_c: f64,
    pub base_c: f64,
    pub se_base_b: f64,
    pub se_base_c: f64,
    pub weighted_sse: f64,
    pub iterations: usize,
    /// Set on no-post-selection fits, which lean on an uncorrected
    /// leaky-subspace approximation.
    pub approximate: bool,
}

impl FitSummary {
    pub fn from_fit(fit: &DecayFit, approximate: bool) -> Self {
        let (model, b_fixed) = match fit.model {
            DecayModel::ReducedB => ("reduced_b".to_string(), None),
            DecayModel::ReducedC => ("reduced_c".to_string(), None),
            DecayModel::Full { b } => ("full".to_string(), Some(b)),
        };
        Self {
            model,
            b_fixed,
            amp_b: fit.amp_b,
            base_b: fit.base_b,
            amp_c: fit.amp_c,
            base_c: fit.base_c,
            se_base_b: fit.se_base_b,
            se_base_c: fit.se_base_c,
            weighted_sse: fit.weighted_sse,
            iterations: fit.iterations,
            approximate,
        }
    }

    pub fn decay_model(&self) -> Result<DecayModel> {
        Ok(match self.model.as_str() {
            "reduced_b" => DecayModel::ReducedB,
            "reduced_c" => DecayModel::ReducedC,
            "full" => DecayModel::Full { b: self.b_fixed.context("full model needs b_fixed")? },
            other => bail!("unknown fit model {other:?}"),
        })
    }

    /// Fitted survival at length m.
    pub fn predict(&self, m: f64) -> f64 {
        let powm = |base: f64, e: f64| -> f64 {
            if base >= 0.0 {
                base.powf(e)
            } else {
                let p = (-base).powf(e);
                if (e as i64) % 2 == 0 { p } else { -p }
            }
        };
        match self.model.as_str() {
            "reduced_b" => 0.25 + self.amp_b * powm(self.base_b, m),
            "reduced_c" => 0.25 + self.amp_c * powm(self.base_c, m),
            _ => 0.25 + self.amp_b * powm(self.base_b, m) + self.amp_c * powm(self.base_c, m),
        }
    }

    /// The decay base this fit estimates.
    pub fn primary_base(&self) -> f64 {
        if self.model == "reduced_b" { self.base_b } else { self.base_c }
    }
}

/// Final fidelity numbers for one experiment (possibly a paired pair of
/// runs).
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityEstimate {
    pub b: f64,
    pub c: f64,
    /// True when no phased run was available and c was taken equal to b.
    pub c_assumed_equal_b: bool,
    pub fidelity: f64,
    pub infidelity: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub resamples: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub records: Vec<SurvivalRecord>,
    pub fit: Option<FitSummary>,
    pub no_postselection: Option<FitSummary>,
    pub estimate: Option<FidelityEstimate>,
}

pub fn render_results(results: &ExperimentResults) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_HEADER}");
    let _ = writeln!(out, "[config]");
    for line in results.config.to_toml().lines() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "[records]");
    let _ = writeln!(out, "# m replicate pauli total ancilla_rejected accepted successes seed");
    for r in results.records.iter() {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            r.m,
            r.replicate,
            r.compiled_pauli.name(),
            r.total_shots,
            r.ancilla_rejected,
            r.accepted,
            r.successes,
            r.seed
        );
    }
    let est = estimate_survival(&results.records);
    let _ = writeln!(out, "[survival]");
    let _ = writeln!(out, "# m q_bar accepted total discard_fraction n_sequences");
    for p in est.points.iter() {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            p.m, p.q_bar, p.accepted, p.total_shots, p.discard_fraction, p.n_sequences
        );
    }
    if !est.excluded_lengths.is_empty() {
        let _ = writeln!(out, "[excluded]");
        for m in est.excluded_lengths.iter() {
            let _ = writeln!(out, "{m}");
        }
    }
    if let Some(fit) = results.fit.as_ref() {
        let _ = writeln!(out, "[fit]");
        render_fit(&mut out, fit);
    }
    if let Some(fit) = results.no_postselection.as_ref() {
        let _ = writeln!(out, "[no_postselection]");
        render_fit(&mut out, fit);
    }
    if let Some(e) = results.estimate.as_ref() {
        let _ = writeln!(out, "[estimate]");
        let _ = writeln!(out, "b {}", e.b);
        let _ = writeln!(out, "c {}", e.c);
        let _ = writeln!(out, "c_assumed_equal_b {}", e.c_assumed_equal_b);
        let _ = writeln!(out, "fidelity {}", e.fidelity);
        let _ = writeln!(out, "infidelity {}", e.infidelity);
        let _ = writeln!(out, "ci_low {}", e.ci_low);
        let _ = writeln!(out, "ci_high {}", e.ci_high);
        let _ = writeln!(out, "resamples {}", e.resamples);
    }
    out
}

fn render_fit(out: &mut String, fit: &FitSummary) {
    let _ = writeln!(out, "model {}", fit.model);
    if let Some(b) = fit.b_fixed {
        let _ = writeln!(out, "b_fixed {b}");
    }
    let _ = writeln!(out, "amp_b {}", fit.amp_b);
    let _ = writeln!(out, "base_b {}", fit.base_b);
    let _ = writeln!(out, "amp_c {}", fit.amp_c);
    let _ = writeln!(out, "base_c {}", fit.base_c);
    let _ = writeln!(out, "se_base_b {}", fit.se_base_b);
    let _ = writeln!(out, "se_base_c {}", fit.se_base_c);
    let _ = writeln!(out, "weighted_sse {}", fit.weighted_sse);
    let _ = writeln!(out, "iterations {}", fit.iterations);
    let _ = writeln!(out, "approximate {}", fit.approximate);
}

pub fn write_results(results: &ExperimentResults, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, render_results(results))
        .with_context(|| format!("writing {}", path.display()))
}

pub fn read_results(text: &str) -> Result<ExperimentResults> {
    let mut lines = text.lines().peekable();
    let header = lines.next().context("empty results file")?;
    if header.trim() != FORMAT_HEADER {
        bail!("unrecognized results header {header:?}");
    }
    let mut config_text = String::new();
    let mut records = Vec::new();
    let mut fit = None;
    let mut no_postselection = None;
    let mut estimate_map: Vec<(String, String)> = Vec::new();
    let mut section = String::new();
    let mut fit_map: Vec<(String, String)> = Vec::new();
    let mut nops_map: Vec<(String, String)> = Vec::new();

    for line in lines {
        let trimmed = line.trim_end();
        if trimmed.starts_with('[') && trimmed.ends_with(']') && !trimmed.starts_with("  ") {
            section = trimmed[1..trimmed.len() - 1].to_string();
            continue;
        }
        if trimmed.is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        match section.as_str() {
            "config" => {
                config_text.push_str(line.strip_prefix("  ").unwrap_or(line));
                config_text.push('\n');
            }
            "records" => {
                let mut parts = trimmed.split_whitespace();
                let mut next = || parts.next().context("short record line");
                let m: usize = next()?.parse()?;
                let replicate: usize = next()?.parse()?;
                let pauli = CompiledPauli::parse(next()?).context("bad pauli")?;
                let total_shots: u32 = next()?.parse()?;
                let ancilla_rejected: u32 = next()?.parse()?;
                let accepted: u32 = next()?.parse()?;
                let successes: u32 = next()?.parse()?;
                let seed: u64 = next()?.parse()?;
                records.push(SurvivalRecord {
                    m,
                    replicate,
                    compiled_pauli: pauli,
                    total_shots,
                    ancilla_rejected,
                    accepted,
                    successes,
                    seed,
                });
            }
            "survival" | "excluded" => {} // derived from records on load
            "fit" => push_kv(&mut fit_map, trimmed)?,
            "no_postselection" => push_kv(&mut nops_map, trimmed)?,
            "estimate" => push_kv(&mut estimate_map, trimmed)?,
            other => bail!("unknown results section {other:?}"),
        }
    }
    if !fit_map.is_empty() {
        fit = Some(fit_from_map(&fit_map)?);
    }
    if !nops_map.is_empty() {
        no_postselection = Some(fit_from_map(&nops_map)?);
    }
    let estimate = if estimate_map.is_empty() {
        None
    } else {
        let get = |k: &str| -> Result<&str> {
            estimate_map
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .with_context(|| format!("estimate missing {k}"))
        };
        Some(FidelityEstimate {
            b: get("b")?.parse()?,
            c: get("c")?.parse()?,
            c_assumed_equal_b: get("c_assumed_equal_b")?.parse()?,
            fidelity: get("fidelity")?.parse()?,
            infidelity: get("infidelity")?.parse()?,
            ci_low: get("ci_low")?.parse()?,
            ci_high: get("ci_high")?.parse()?,
            resamples: get("resamples")?.parse()?,
        })
    };
    let config = ExperimentConfig::parse(&config_text).context("embedded config")?;
    Ok(ExperimentResults { config, records, fit, no_postselection, estimate })
}

pub fn load_results(path: &std::path::Path) -> Result<ExperimentResults> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    read_results(&text)
}

fn push_kv(map: &mut Vec<(String, String)>, line: &str) -> Result<()> {
    let (k, v) = line
        .split_once(' ')
        .with_context(|| format!("expected 'key value' line, found {line:?}"))?;
    map.push((k.to_string(), v.trim().to_string()));
    Ok(())
}

fn fit_from_map(map: &[(String, String)]) -> Result<FitSummary> {
    let get = |k: &str| -> Result<&str> {
        map.iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.as_str())
            .with_context(|| format!("fit section missing {k}"))
    };
    Ok(FitSummary {
        model: get("model")?.to_string(),
        b_fixed: map
            .iter()
            .find(|(k, _)| k == "b_fixed")
            .map(|(_, v)| v.parse())
            .transpose()?,
        amp_b: get("amp_b")?.parse()?,
        base_b: get("base_b")?.parse()?,
        amp_c: get("amp_c")?.parse()?,
        base_c: get("base_c")?.parse()?,
        se_base_b: get("se_base_b")?.parse()?,
        se_base_c: get("se_base_c")?.parse()?,
        weighted_sse: get("weighted_sse")?.parse()?,
        iterations: get("iterations")?.parse()?,
        approximate: get("approximate")?.parse()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_results() -> ExperimentResults {
        let config = ExperimentConfig::parse(
            "[experiment]\nrun_type = \"physical_standard\"\nseed = 9\n",
        )
        .unwrap();
        let records = vec![SurvivalRecord {
            m: 2,
            replicate: 0,
            compiled_pauli: CompiledPauli::XI,
            total_shots: 1024,
            ancilla_rejected: 0,
            accepted: 1024,
            successes: 1000,
            seed: 777,
        }];
        ExperimentResults {
            config,
            records,
            fit: Some(FitSummary {
                model: "reduced_b".to_string(),
                b_fixed: None,
                amp_b: 0.7345678901234567,
                base_b: 0.987654321,
                amp_c: f64::NAN,
                base_c: f64::NAN,
                se_base_b: 0.001,
                se_base_c: f64::NAN,
                weighted_sse: 12.5,
                iterations: 17,
                approximate: false,
            }),
            no_postselection: None,
            estimate: Some(FidelityEstimate {
                b: 0.987654321,
                c: 0.987654321,
                c_assumed_equal_b: true,
                fidelity: 0.99074074,
                infidelity: 0.00925926,
                ci_low: 0.008,
                ci_high: 0.011,
                resamples: 999,
            }),
        }
    }

    #[test]
    fn round_trip_preserves_payload() {
        let results = sample_results();
        let text = render_results(&results);
        let back = read_results(&text).unwrap();
        assert_eq!(back.records, results.records);
        let fit = back.fit.unwrap();
        assert_eq!(fit.base_b.to_bits(), 0.987654321f64.to_bits());
        assert_eq!(fit.amp_b.to_bits(), 0.7345678901234567f64.to_bits());
        assert_eq!(back.estimate, results.estimate);
        assert_eq!(back.config.experiment.seed, 9);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_results(&sample_results());
        let b = render_results(&sample_results());
        assert_eq!(a, b);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_results("something else\n").is_err());
    }
}
