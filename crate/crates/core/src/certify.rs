//! The gap criterion for the locking property.
//!
//! At level n the potential is replaced by A_n f, whose BG_n mean-cycle gap
//! is computed exactly. If that gap strictly exceeds
//!
//! ```text
//! Σ_{k≥n} (k−n+1)·max_{|w|=k} |c_w(f)|
//! ```
//!
//! the heaviest cycle's periodic orbit carries the unique maximizing
//! measure of f, and it stays so under small Lipschitz perturbations.

use serde::{Deserialize, Serialize};

use crate::debruijn::{assign_table_weights, build_graph, cycle_to_periodic_point};
use crate::error::{Error, Result};
use crate::haar::{HaarTable, Potential};
use crate::mean_cycle::{gap, GapResult};
use crate::symbolic::{lyndon_words, DecayModel, PeriodicPoint};

/// Relative slack on the tail before the strict inequality is accepted.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

/// Extra Haar levels used by [`soundness_check`] beyond the certified level.
pub const SOUNDNESS_DEPTH: usize = 4;

pub const MAX_SOUNDNESS_PERIOD: usize = 16;

/// Anything whose level-n Haar data and coefficient tail can be bounded.
pub trait HaarSource: Send + Sync {
    /// Haar expansion of A_n f (levels below n), and a bound on the error
    /// of the cylinder values it encodes.
    fn level_table(&self, n: usize) -> Result<(HaarTable, f64)>;

    /// Certified bound on Σ_{k≥n} (k−n+1)·max_{|w|=k} |c_w(f)|.
    fn tail_majorant(&self, model: &DecayModel, n: usize) -> Result<f64>;

    /// Deepest level `level_table` can serve, if limited.
    fn max_level(&self) -> Option<usize>;

    fn describe(&self) -> serde_json::Value;
}

impl HaarSource for Potential {
    fn level_table(&self, n: usize) -> Result<(HaarTable, f64)> {
        self.haar_table(n)
    }

    fn tail_majorant(&self, model: &DecayModel, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::usage("tail majorant needs n ≥ 1"));
        }
        match self {
            Potential::Evaluator(e) => {
                if &e.model != model {
                    return Err(Error::usage(
                        "evaluator's Lipschitz constant refers to a different decay model",
                    ));
                }
                Ok(e.lip * model.tail_sum_bound(n)?)
            }
            _ => {
                let table = self.exact_table()?.expect("step potential");
                Ok(exact_weighted_tail(&table, n))
            }
        }
    }

    fn max_level(&self) -> Option<usize> {
        match self {
            Potential::Evaluator(e) => Some(e.quadrature_depth),
            _ => None,
        }
    }

    fn describe(&self) -> serde_json::Value {
        Potential::describe(self)
    }
}

/// Σ_{k=n}^{L−1} (k−n+1)·max_{|w|=k}|c_w| for a finite table.
pub fn exact_weighted_tail(table: &HaarTable, n: usize) -> f64 {
    (n..table.max_level())
        .map(|k| (k - n + 1) as f64 * table.max_abs_at_level(k))
        .sum()
}

pub fn tail_majorant(f: &dyn HaarSource, model: &DecayModel, n: usize) -> Result<f64> {
    f.tail_majorant(model, n)
}

/// One row of a level search: the gap at level n against its tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub gap: f64,
    /// Tail majorant plus the gap error of approximate Haar data.
    pub tail_bound: f64,
    /// gap − tail_bound; negative values are the deficit.
    pub margin: f64,
    pub certified: bool,
    /// The two heaviest cycles have equal mean.
    pub tie: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub potential: serde_json::Value,
    pub model: DecayModel,
    pub slack: f64,
    /// Error bound of the A_n cylinder values used for the gap.
    pub approximation_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LockingCertificate {
    pub level: usize,
    pub gap: f64,
    pub tail_bound: f64,
    pub margin: f64,
    pub orbit: PeriodicPoint,
    pub measure: String,
    pub best_mean: f64,
    pub second_mean: f64,
    pub best_cycle: Vec<String>,
    pub second_cycle: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LevelOutcome {
    Certified(LockingCertificate),
    Failed(LevelReport),
}

impl LevelOutcome {
    pub fn report(&self) -> LevelReport {
        match self {
            LevelOutcome::Certified(c) => LevelReport {
                level: c.level,
                gap: c.gap,
                tail_bound: c.tail_bound,
                margin: c.margin,
                certified: true,
                tie: false,
            },
            LevelOutcome::Failed(r) => r.clone(),
        }
    }

    pub fn certificate(&self) -> Option<&LockingCertificate> {
        match self {
            LevelOutcome::Certified(c) => Some(c),
            LevelOutcome::Failed(_) => None,
        }
    }
}

/// Gap of A_n f on BG_n, with the cylinder-value error bound of the data.
pub fn level_gap(f: &dyn HaarSource, n: usize) -> Result<(GapResult, f64, crate::digraph::WeightedDigraph)> {
    let (table, value_error) = f.level_table(n)?;
    let graph = assign_table_weights(&build_graph(n)?, &table)?;
    let result = gap(&graph)?;
    Ok((result, value_error, graph))
}

pub fn certify_at_level(f: &dyn HaarSource, model: &DecayModel, n: usize) -> Result<LevelOutcome> {
    model.validate()?;
    if n == 0 {
        return Err(Error::usage("levels start at 1"));
    }
    let (result, value_error, graph) = level_gap(f, n)?;
    // each cycle mean moves by at most the value error, the gap by twice that
    let tail_bound = f.tail_majorant(model, n)? + 2.0 * value_error;
    let margin = result.gap - tail_bound;
    let tie = result.gap == 0.0;
    if tie || result.gap <= (1.0 + CERTIFICATE_SLACK) * tail_bound {
        return Ok(LevelOutcome::Failed(LevelReport {
            level: n,
            gap: result.gap,
            tail_bound,
            margin,
            certified: false,
            tie,
        }));
    }
    let orbit = cycle_to_periodic_point(&graph, &result.best.witness_cycle)?;
    Ok(LevelOutcome::Certified(LockingCertificate {
        level: n,
        gap: result.gap,
        tail_bound,
        margin,
        measure: format!(
            "uniform measure on the period-{} orbit of ({})^∞",
            orbit.period(),
            orbit.repeating_word()
        ),
        orbit,
        best_mean: result.best.max_mean,
        second_mean: result.second_mean,
        best_cycle: result.best.witness_cycle.labels(&graph),
        second_cycle: result.second_witness.labels(&graph),
        provenance: Provenance {
            potential: f.describe(),
            model: model.clone(),
            slack: CERTIFICATE_SLACK,
            approximation_error: value_error,
        },
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LockingSearch {
    pub certificate: Option<LockingCertificate>,
    pub trace: Vec<LevelReport>,
}

/// Certifies at the smallest level 1..=n_max where the criterion holds.
pub fn find_locking_level(f: &dyn HaarSource, model: &DecayModel, n_max: usize) -> Result<LockingSearch> {
    let mut trace = Vec::new();
    for n in 1..=n_max {
        let outcome = certify_at_level(f, model, n)?;
        trace.push(outcome.report());
        if let LevelOutcome::Certified(cert) = outcome {
            return Ok(LockingSearch {
                certificate: Some(cert),
                trace,
            });
        }
    }
    Ok(LockingSearch {
        certificate: None,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub passed: bool,
    /// Level m of the approximation A_m f used for the comparison.
    pub depth: usize,
    pub certified_average: f64,
    /// Bound on how far orbit averages of f and A_m f can be apart, doubled.
    pub allowance: f64,
    pub orbits_checked: usize,
    /// Heaviest other orbit (canonical block) and its A_m f average.
    pub best_competitor: Option<(String, f64)>,
}

/// Brute-force cross-check of a certificate: no periodic orbit of period
/// ≤ `max_period` may beat the certified orbit's average of A_m f by more
/// than the approximation allowance.
pub fn soundness_check(
    cert: &LockingCertificate,
    f: &dyn HaarSource,
    max_period: usize,
) -> Result<SoundnessReport> {
    if max_period == 0 || max_period > MAX_SOUNDNESS_PERIOD {
        return Err(Error::resource(format!(
            "period bound {max_period} outside 1..={MAX_SOUNDNESS_PERIOD}"
        )));
    }
    let depth = match f.max_level() {
        Some(limit) => (cert.level + SOUNDNESS_DEPTH).min(limit).max(cert.level),
        None => cert.level + SOUNDNESS_DEPTH,
    };
    let (table, value_error) = f.level_table(depth)?;
    let values = table.cylinder_values(depth);
    let allowance = f.tail_majorant(&cert.provenance.model, depth)? + 2.0 * value_error;
    let average = |p: &PeriodicPoint| p.orbit_average(depth, |w| values.values[w.index() as usize]);

    let target = cert.orbit.canonicalize();
    let certified_average = average(&target);
    let mut best_competitor: Option<(String, f64)> = None;
    let mut orbits_checked = 0;
    for block in lyndon_words(max_period) {
        if &block == target.repeating_word() {
            continue;
        }
        orbits_checked += 1;
        let avg = average(&PeriodicPoint::canonical(block.clone())?);
        if best_competitor.as_ref().is_none_or(|(_, b)| avg > *b) {
            best_competitor = Some((block.to_string(), avg));
        }
    }
    let passed = best_competitor
        .as_ref()
        .is_none_or(|(_, b)| *b < certified_average + allowance);
    Ok(SoundnessReport {
        passed,
        depth,
        certified_average,
        allowance,
        orbits_checked,
        best_competitor,
    })
}
