//! Fitting-chart data as CSV: per length, the pooled survival, its
//! binomial error, the fitted curve, and the discard fraction. Enough to
//! redraw the decay charts and discard bars in any plotting tool.

use crate::results::ExperimentResults;
use anyhow::Result;
use rb422_core::rb::{estimate_survival, estimate_survival_no_postselection};
use std::fmt::Write as _;

pub fn survival_csv(results: &ExperimentResults) -> String {
    let est = estimate_survival(&results.records);
    let mut out = String::from("m,q_bar,binomial_error,fitted,discard_fraction\n");
    for p in est.points.iter() {
        let err = if p.accepted > 0 {
            (p.q_bar * (1.0 - p.q_bar) / p.accepted as f64).sqrt()
        } else {
            0.0
        };
        let fitted = results
            .fit
            .as_ref()
            .map(|f| f.predict(p.m as f64))
            .unwrap_or(f64::NAN);
        let _ = writeln!(out, "{},{},{},{},{}", p.m, p.q_bar, err, fitted, p.discard_fraction);
    }
    out
}

/// The all-shots (no post-selection) companion series, when the results
/// carry that fit.
pub fn no_postselection_csv(results: &ExperimentResults) -> Option<String> {
    let fit = results.no_postselection.as_ref()?;
    let est = estimate_survival_no_postselection(&results.records);
    let mut out = String::from("m,q_bar,binomial_error,fitted,discard_fraction\n");
    for p in est.points.iter() {
        let err = if p.total_shots > 0 {
            (p.q_bar * (1.0 - p.q_bar) / p.total_shots as f64).sqrt()
        } else {
            0.0
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.m,
            p.q_bar,
            err,
            fit.predict(p.m as f64),
            p.discard_fraction
        );
    }
    Some(out)
}

pub fn write_plot_data(results: &ExperimentResults, out: &std::path::Path) -> Result<()> {
    std::fs::write(out, survival_csv(results))?;
    if let Some(csv) = no_postselection_csv(results) {
        let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
        let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
        let companion = out.with_file_name(format!("{stem}_no_postselection.{ext}"));
        std::fs::write(companion, csv)?;
    }
    Ok(())
}
