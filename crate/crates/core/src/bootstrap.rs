//! Nonparametric bootstrap over benchmarking sequences.
//!
//! Per resample and per length, whole sequences are drawn with replacement;
//! each drawn sequence's success count is redrawn from a binomial with its
//! empirical survival probability and its own trial count (accepted shots
//! on the encoded platform, total shots on the bare one). The resampled
//! experiment is refit end to end and one infidelity recorded. Confidence
//! bounds are the empirical 2.5% / 97.5% order statistics (the 250th and
//! 9,750th of 9,999 resamples).
//!
//! Resample `r` draws all of its randomness from `derive_seed(seed, [r])`,
//! so any partition of the resample range across threads reproduces the
//! same numbers.

use crate::error::{Error, Result};
use crate::fit::{DecayModel, FitPoint, fidelity_from_params, fit_decay, fit_phased};
use crate::rb::{SurvivalRecord, derive_seed};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Per-sequence survival statistic: the resampling unit.
#[derive(Clone, Copy, Debug)]
pub struct SequenceStat {
    pub m: usize,
    pub trials: u32,
    pub successes: u32,
}

/// Reduce records to per-sequence stats. `post_selected` picks accepted
/// shots as the trial count (encoded platform); otherwise total shots.
pub fn sequence_stats(records: &[SurvivalRecord], post_selected: bool) -> Vec<SequenceStat> {
    records
        .iter()
        .map(|r| SequenceStat {
            m: r.m,
            trials: if post_selected { r.accepted } else { r.total_shots },
            successes: r.successes,
        })
        .collect()
}

/// Binomial(n, p) sampler via a precomputed inverse CDF table, windowed to
/// eight standard deviations around the mean (tail mass below 1e-15).
/// Exact to f64 rounding otherwise, and free of distribution crates.
#[derive(Clone, Debug)]
struct BinomialSampler {
    n: u32,
    first: u32,
    cdf: Vec<f64>,
}

impl BinomialSampler {
    fn new(n: u32, p: f64) -> Self {
        if n == 0 || p <= 0.0 {
            return Self { n, first: 0, cdf: alloc::vec![1.0] };
        }
        if p >= 1.0 {
            return Self { n, first: n, cdf: alloc::vec![1.0] };
        }
        let nf = n as f64;
        let mean = nf * p;
        let sigma = libm::sqrt(nf * p * (1.0 - p));
        let lo = libm::fmax(0.0, libm::floor(mean - 8.0 * sigma - 2.0)) as u32;
        let hi = libm::fmin(nf, libm::ceil(mean + 8.0 * sigma + 2.0)) as u32;
        let ln_p = libm::log(p);
        let ln_q = libm::log(1.0 - p);
        let ln_n1 = libm::lgamma(nf + 1.0);
        let mut cdf = Vec::with_capacity((hi - lo + 1) as usize);
        let mut acc = 0.0;
        for k in lo..=hi {
            let kf = k as f64;
            let ln_pmf = ln_n1 - libm::lgamma(kf + 1.0) - libm::lgamma(nf - kf + 1.0)
                + kf * ln_p
                + (nf - kf) * ln_q;
            acc += libm::exp(ln_pmf);
            cdf.push(acc);
        }
        // Close the tail so every u in [0, 1) lands inside the window.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Self { n, first: lo, cdf }
    }

    fn sample(&self, u: f64) -> u32 {
        let idx = self.cdf.partition_point(|&c| c < u) as u32;
        (self.first + idx).min(self.n)
    }
}

struct SequencePlan {
    trials: u32,
    sampler: BinomialSampler,
}

struct LengthGroup {
    m: usize,
    sequences: Vec<SequencePlan>,
}

struct RunPlan {
    groups: Vec<LengthGroup>,
}

impl RunPlan {
    fn new(stats: &[SequenceStat]) -> Result<Self> {
        if stats.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let mut by_m: BTreeMap<usize, Vec<&SequenceStat>> = BTreeMap::new();
        for s in stats {
            by_m.entry(s.m).or_default().push(s);
        }
        let groups = by_m
            .into_iter()
            .map(|(m, seqs)| LengthGroup {
                m,
                sequences: seqs
                    .iter()
                    .map(|s| {
                        let p = if s.trials == 0 {
                            0.0
                        } else {
                            s.successes as f64 / s.trials as f64
                        };
                        SequencePlan { trials: s.trials, sampler: BinomialSampler::new(s.trials, p) }
                    })
                    .collect(),
            })
            .collect();
        Ok(Self { groups })
    }

    fn resample(&self, rng: &mut ChaCha12Rng) -> Vec<FitPoint> {
        let mut points = Vec::with_capacity(self.groups.len());
        for group in self.groups.iter() {
            let k = group.sequences.len();
            let mut trials = 0u64;
            let mut successes = 0u64;
            for _ in 0..k {
                let pick = &group.sequences[rng.gen_range(0..k)];
                trials += pick.trials as u64;
                successes += pick.sampler.sample(rng.gen()) as u64;
            }
            if trials == 0 {
                continue;
            }
            points.push(FitPoint {
                m: group.m,
                q: successes as f64 / trials as f64,
                weight: trials as f64,
            });
        }
        points
    }
}

/// Precomputed bootstrap state for one experiment: a standard run and,
/// optionally, a paired phased run supplying the second decay base.
pub struct BootstrapPlan {
    standard: RunPlan,
    phased: Option<RunPlan>,
}

impl BootstrapPlan {
    pub fn new(standard: &[SequenceStat], phased: Option<&[SequenceStat]>) -> Result<Self> {
        Ok(Self {
            standard: RunPlan::new(standard)?,
            phased: phased.map(RunPlan::new).transpose()?,
        })
    }

    /// One resampled infidelity. NaN when the resampled fit fails (rare;
    /// filtered and counted by [`bootstrap_ci`]).
    pub fn resample_infidelity(&self, seed: u64, resample: u64) -> f64 {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, &[0x626f_6f74, resample]));
        let standard_points = self.standard.resample(&mut rng);
        let Ok(std_fit) = fit_decay(&standard_points, DecayModel::ReducedB) else {
            return f64::NAN;
        };
        let b = std_fit.base_b.clamp(-1.0, 1.0);
        let c = match self.phased.as_ref() {
            None => b,
            Some(plan) => {
                // Mirror the point estimator, model selection included.
                let phased_points = plan.resample(&mut rng);
                let Ok(fit) = fit_phased(&phased_points, b) else {
                    return f64::NAN;
                };
                fit.chosen().base_c.clamp(-1.0, 1.0)
            }
        };
        match fidelity_from_params(b, c) {
            Ok(f) => 1.0 - f,
            Err(_) => f64::NAN,
        }
    }
}

/// Bootstrap percentile interval for the experiment infidelity.
#[derive(Clone, Copy, Debug)]
pub struct BootstrapCi {
    pub ci_low: f64,
    pub ci_high: f64,
    pub resamples: usize,
    /// Resamples whose refit failed and were excluded.
    pub failures: usize,
}

/// Run `resamples` bootstrap iterations sequentially. Parallel drivers can
/// instead spread [`BootstrapPlan::resample_infidelity`] over any partition
/// of `0..resamples` and feed the values to [`percentile_ci`].
pub fn bootstrap_ci(
    standard: &[SequenceStat],
    phased: Option<&[SequenceStat]>,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapCi> {
    let plan = BootstrapPlan::new(standard, phased)?;
    let values: Vec<f64> =
        (0..resamples as u64).map(|r| plan.resample_infidelity(seed, r)).collect();
    percentile_ci(values, resamples)
}

/// 2.5% / 97.5% order statistics at positions `0.025 (R+1)` and
/// `0.975 (R+1)` (the 250th and 9,750th for R = 9,999).
pub fn percentile_ci(mut values: Vec<f64>, resamples: usize) -> Result<BootstrapCi> {
    let before = values.len();
    values.retain(|v| v.is_finite());
    let failures = before - values.len();
    // Refit failures should be exceptional; bail if they are not.
    if values.len() < resamples - resamples / 20 || values.is_empty() {
        return Err(Error::InsufficientData { needed: resamples, got: values.len() });
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let r = values.len();
    let order = |p: f64| -> usize {
        let k = (p * (r as f64 + 1.0)) as usize;
        k.clamp(1, r) - 1
    };
    Ok(BootstrapCi {
        ci_low: values[order(0.025)],
        ci_high: values[order(0.975)],
        resamples: r,
        failures,
    })
}
