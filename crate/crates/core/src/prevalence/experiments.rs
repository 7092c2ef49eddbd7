use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::brick::{gap_of_sum, sample_brick, sample_with_frozen, FrozenLevels, PerturbedPotential};
use super::gauge::{Gauge, Regime};
use super::rng::derive_seed;
use crate::certify::{find_locking_level, LevelReport};
use crate::error::{Error, Result};
use crate::haar::{Potential, PotentialSpec};
use crate::stats::clopper_pearson_upper;

pub const SCHEMA: &str = "shift-lock/1";
pub const CONFIDENCE: f64 = 0.99;
pub const MAX_TRIALS: usize = 10_000_000;
pub const MAX_EXPERIMENT_LEVEL: usize = 16;

/// Child-seed index reserved for the per-block low-level draws.
const BLOCK_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ConditionalGap,
    LevelBound,
    Prevalence,
}

/// How often the draws below the top level are refreshed in the
/// conditional gap experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Conditioning {
    #[default]
    PerTrial,
    PerBlock { block_size: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub threshold: f64,
    pub trials: usize,
    pub events: usize,
    pub rate: f64,
    pub upper_99: f64,
    pub bound: f64,
    pub pass: bool,
}

/// One row per trial (and per level for the level-bound experiment).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: Option<usize>,
    pub gap: Option<f64>,
    pub threshold: Option<f64>,
    pub event: Option<bool>,
    pub onward_level: Option<usize>,
    pub certified_level: Option<usize>,
    pub tail_bound: Option<f64>,
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureTrace {
    pub trial: usize,
    pub seed: u64,
    pub trace: Vec<LevelReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceSummary {
    pub samples: usize,
    pub certified: usize,
    /// `None` when no samples were drawn.
    pub certified_fraction: Option<f64>,
    pub level_histogram: BTreeMap<usize, usize>,
    pub failures: Vec<FailureTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub kind: ExperimentKind,
    pub config: serde_json::Value,
    pub seed: u64,
    pub regime: Regime,
    pub summary: Vec<SummaryRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prevalence: Option<PrevalenceSummary>,
    /// All summary rows pass; `None` for the prevalence experiment.
    pub pass: Option<bool>,
    pub trials: Vec<TrialRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExperimentReport {
    fn new(kind: ExperimentKind, config: serde_json::Value, seed: u64, gauge: &Gauge) -> Self {
        ExperimentReport {
            schema: SCHEMA.into(),
            kind,
            config,
            seed,
            regime: Regime::of(&gauge.model),
            summary: Vec::new(),
            prevalence: None,
            pass: None,
            trials: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    /// Per-trial rows as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.trials {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn summary_row(n: usize, epsilon: Option<f64>, threshold: f64, events: usize, trials: usize, bound: f64) -> Result<SummaryRow> {
    let upper_99 = clopper_pearson_upper(events as u64, trials as u64, CONFIDENCE)?;
    Ok(SummaryRow {
        n,
        epsilon,
        threshold,
        trials,
        events,
        rate: events as f64 / trials as f64,
        upper_99,
        bound,
        pass: upper_99 <= bound,
    })
}

fn check_trials(trials: usize, min: usize) -> Result<()> {
    if trials < min {
        return Err(Error::usage(format!("at least {min} trials required, got {trials}")));
    }
    if trials > MAX_TRIALS {
        return Err(Error::resource(format!("{trials} trials exceed the cap of {MAX_TRIALS}")));
    }
    Ok(())
}

fn check_level(n: usize) -> Result<()> {
    if n > MAX_EXPERIMENT_LEVEL {
        return Err(Error::resource(format!("level {n} above {MAX_EXPERIMENT_LEVEL}")));
    }
    Ok(())
}

/// Estimates P(Gap_n(f0 + g) ≤ 2^{−n}·b_{n−1}·ε) and compares the 99%
/// upper confidence bound with 2^n·ε. Only the level-(n−1) draws are fresh
/// in each trial; lower levels follow `conditioning`.
pub fn verify_conditional_gap_bound(
    f0: &Potential,
    gauge: &Gauge,
    n: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
    conditioning: Conditioning,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    gauge.validate()?;
    if n < 2 {
        return Err(Error::usage("the conditional gap bound needs n ≥ 2"));
    }
    check_level(n)?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::usage(format!("epsilon {epsilon} outside (0, 1/2)")));
    }
    check_trials(trials, 100)?;
    if let Conditioning::PerBlock { block_size: 0 } = conditioning {
        return Err(Error::usage("block size must be positive"));
    }
    let threshold = 0.5f64.powi(n as i32) * gauge.b(n - 1) * epsilon;
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i as u64);
            let frozen = match conditioning {
                Conditioning::PerTrial => None,
                Conditioning::PerBlock { block_size } => Some(FrozenLevels {
                    seed: derive_seed(derive_seed(seed, BLOCK_STREAM), (i / block_size) as u64),
                    below: n - 1,
                }),
            };
            let g = sample_with_frozen(gauge, n, trial_seed, frozen)?;
            let gap = gap_of_sum(f0, &g, n)?.gap;
            Ok(TrialRecord {
                trial: i,
                seed: trial_seed,
                n: Some(n),
                gap: Some(gap),
                threshold: Some(threshold),
                event: Some(gap <= threshold),
                ..Default::default()
            })
        })
        .collect::<Result<_>>()?;
    let events = records.iter().filter(|r| r.event == Some(true)).count();
    let config = serde_json::json!({
        "kind": ExperimentKind::ConditionalGap,
        "f0": f0.describe(),
        "gauge": gauge,
        "n": n,
        "epsilon": epsilon,
        "trials": trials,
        "seed": seed,
        "conditioning": conditioning,
    });
    let mut report = ExperimentReport::new(ExperimentKind::ConditionalGap, config, seed, gauge);
    let row = summary_row(n, Some(epsilon), threshold, events, trials, 2f64.powi(n as i32) * epsilon)?;
    report.pass = Some(row.pass);
    report.summary.push(row);
    report.trials = records;
    report.wall_time = start.elapsed();
    Ok(report)
}

/// For n in `n_lo..=n_hi`, estimates P(Gap_n(f0 + g) ≤ 4^{−n}·n^{−3}·b_{n−1})
/// over fresh samples and compares the 99% upper bound with n^{−3}.
pub fn verify_level_bound(
    f0: &Potential,
    gauge: &Gauge,
    n_lo: usize,
    n_hi: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    gauge.validate()?;
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::usage(format!("level range {n_lo}..={n_hi} is empty or starts at 0")));
    }
    check_level(n_hi)?;
    check_trials(trials, 1)?;
    let threshold = |n: usize| 0.25f64.powi(n as i32) * (n as f64).powi(-3) * gauge.b(n - 1);
    let per_sample: Vec<Vec<TrialRecord>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i as u64);
            let g = sample_brick(gauge, n_hi, trial_seed)?;
            let mut rows = (n_lo..=n_hi)
                .map(|n| {
                    let gap = gap_of_sum(f0, &g, n)?.gap;
                    Ok(TrialRecord {
                        trial: i,
                        seed: trial_seed,
                        n: Some(n),
                        gap: Some(gap),
                        threshold: Some(threshold(n)),
                        event: Some(gap <= threshold(n)),
                        ..Default::default()
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            // smallest n from which Gap_n ≥ threshold holds through n_hi
            let mut onward = None;
            for r in rows.iter().rev() {
                if r.gap.unwrap() >= r.threshold.unwrap() {
                    onward = r.n;
                } else {
                    break;
                }
            }
            rows.iter_mut().for_each(|r| r.onward_level = onward);
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_sample.into_iter().flatten().collect();
    let config = serde_json::json!({
        "kind": ExperimentKind::LevelBound,
        "f0": f0.describe(),
        "gauge": gauge,
        "n_range": [n_lo, n_hi],
        "trials": trials,
        "seed": seed,
    });
    let mut report = ExperimentReport::new(ExperimentKind::LevelBound, config, seed, gauge);
    for n in n_lo..=n_hi {
        let events = records
            .iter()
            .filter(|r| r.n == Some(n) && r.event == Some(true))
            .count();
        report
            .summary
            .push(summary_row(n, None, threshold(n), events, trials, (n as f64).powi(-3))?);
    }
    report.pass = Some(report.summary.iter().all(|r| r.pass));
    report.trials = records;
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Draws `samples` brick perturbations truncated at `n_max` and searches
/// each f0 + g for a locking certificate at levels 1..=n_max.
pub fn prevalence_experiment(
    f0: &Potential,
    gauge: &Gauge,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    gauge.validate()?;
    let regime = Regime::of(&gauge.model);
    if !regime.supports_prevalence() {
        return Err(Error::usage(format!(
            "prevalence needs a theta model with theta < 1/4 ({})",
            regime.description
        )));
    }
    if n_max == 0 {
        return Err(Error::usage("n_max must be at least 1"));
    }
    check_level(n_max)?;
    check_trials(samples, 0)?;
    let outcomes: Vec<(TrialRecord, Option<FailureTrace>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i as u64);
            let g = sample_brick(gauge, n_max, trial_seed)?;
            let search = find_locking_level(&PerturbedPotential::new(f0, &g), &gauge.model, n_max)?;
            let last = search.trace.last().expect("n_max ≥ 1");
            let record = TrialRecord {
                trial: i,
                seed: trial_seed,
                n: Some(last.level),
                gap: Some(last.gap),
                certified_level: search.certificate.as_ref().map(|c| c.level),
                tail_bound: Some(last.tail_bound),
                margin: Some(last.margin),
                ..Default::default()
            };
            let failure = search.certificate.is_none().then_some(FailureTrace {
                trial: i,
                seed: trial_seed,
                trace: search.trace,
            });
            Ok((record, failure))
        })
        .collect::<Result<_>>()?;
    let mut level_histogram = BTreeMap::new();
    let mut failures = Vec::new();
    let mut records = Vec::with_capacity(samples);
    for (record, failure) in outcomes {
        if let Some(level) = record.certified_level {
            *level_histogram.entry(level).or_insert(0) += 1;
        }
        failures.extend(failure);
        records.push(record);
    }
    let certified = samples - failures.len();
    let config = serde_json::json!({
        "kind": ExperimentKind::Prevalence,
        "f0": f0.describe(),
        "gauge": gauge,
        "n_max": n_max,
        "trials": samples,
        "seed": seed,
    });
    let mut report = ExperimentReport::new(ExperimentKind::Prevalence, config, seed, gauge);
    report.prevalence = Some(PrevalenceSummary {
        samples,
        certified,
        certified_fraction: (samples > 0).then(|| certified as f64 / samples as f64),
        level_histogram,
        failures,
    });
    report.trials = records;
    report.wall_time = start.elapsed();
    Ok(report)
}

/// File form of an experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub f0: PotentialSpec,
    pub gauge: Gauge,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub seed: u64,
    #[serde(default)]
    pub conditioning: Conditioning,
}

impl ExperimentConfig {
    pub fn run(&self) -> Result<ExperimentReport> {
        let f0 = self.f0.clone().into_potential()?;
        let missing = |field: &str| Error::usage(format!("{:?} experiment needs `{field}`", self.kind));
        match self.kind {
            ExperimentKind::ConditionalGap => verify_conditional_gap_bound(
                &f0,
                &self.gauge,
                self.n.ok_or_else(|| missing("n"))?,
                self.epsilon.ok_or_else(|| missing("epsilon"))?,
                self.trials,
                self.seed,
                self.conditioning,
            ),
            ExperimentKind::LevelBound => {
                let [lo, hi] = self.n_range.ok_or_else(|| missing("n_range"))?;
                verify_level_bound(&f0, &self.gauge, lo, hi, self.trials, self.seed)
            }
            ExperimentKind::Prevalence => prevalence_experiment(
                &f0,
                &self.gauge,
                self.n_max.ok_or_else(|| missing("n_max"))?,
                self.trials,
                self.seed,
            ),
        }
    }
}
