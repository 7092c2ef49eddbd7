//! Quick deterministic checks behind the `selftest` subcommand.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::certify::{certify_at_level, soundness_check};
use crate::debruijn::{assign_table_weights, build_graph, cycle_to_periodic_point};
use crate::digraph::WeightedDigraph;
use crate::error::Result;
use crate::haar::{CylinderValues, HaarTable, Potential};
use crate::mean_cycle::{enumerate_cycles, gap, gap_by_enumeration, max_mean_cycle_karp};
use crate::prevalence::{verify_conditional_gap_bound, Conditioning, Gauge};
use crate::symbolic::{DecayModel, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// A digraph on 1..=max_vertices vertices, each ordered pair (loops
/// included) present with probability `density`, weights uniform on [−1, 1].
pub fn random_digraph(rng: &mut ChaCha8Rng, max_vertices: usize, density: f64) -> WeightedDigraph {
    let n = 1 + (rng.next_u64() % max_vertices as u64) as usize;
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if uniform(rng) < density {
                arcs.push((u, v, 2.0 * uniform(rng) - 1.0));
            }
        }
    }
    WeightedDigraph::new(n, &arcs).expect("vertices in range")
}

fn solver_agreement(graphs: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut inputs: Vec<WeightedDigraph> = (0..graphs).map(|_| random_digraph(&mut rng, 10, 0.3)).collect();
    for n in 2..=5 {
        let weights = (0..1 << n).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect();
        inputs.push(build_graph(n)?.with_weights(weights)?);
    }
    for g in &inputs {
        let cycles = enumerate_cycles(g)?;
        if cycles.is_empty() {
            continue;
        }
        let oracle = cycles.iter().fold(f64::NEG_INFINITY, |m, (_, v)| m.max(*v));
        worst = worst.max((max_mean_cycle_karp(g)?.max_mean - oracle).abs());
        if cycles.len() >= 2 {
            worst = worst.max((gap(g)?.gap - gap_by_enumeration(g)?.gap).abs());
        }
        compared += 1;
    }
    Ok(Check {
        name: "karp and arc-deletion gap agree with enumeration".into(),
        pass: worst <= 1e-12,
        detail: format!("{compared} graphs, worst difference {worst:e}"),
    })
}

fn birkhoff_identity(potentials: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb1c4);
    let mut worst = 0.0f64;
    for _ in 0..potentials {
        let level = 1 + (rng.next_u64() % 5) as usize;
        let values = (0..1 << level).map(|_| 4.0 * uniform(&mut rng) - 2.0).collect();
        let f = Potential::CylinderValues(CylinderValues::new(values)?);
        for n in 1..=4 {
            let (table, _) = f.haar_table(n)?;
            let graph = assign_table_weights(&build_graph(n)?, &table)?;
            let averages = table.cylinder_values(n);
            for (cycle, mean) in enumerate_cycles(&graph)? {
                let orbit = cycle_to_periodic_point(&graph, &cycle)?;
                let avg = orbit.orbit_average(n, |w| averages.values[w.index() as usize]);
                worst = worst.max((mean + table.constant_term() - avg).abs());
            }
        }
    }
    Ok(Check {
        name: "cycle mean plus constant equals orbit average".into(),
        pass: worst <= 1e-10,
        detail: format!("{potentials} potentials, worst difference {worst:e}"),
    })
}

fn indicator_certificate() -> Result<Check> {
    let model = DecayModel::theta(1.0, 0.2)?;
    let f = Potential::cylinder_indicator(&Word::from_index(0, 1));
    let outcome = certify_at_level(&f, &model, 1)?;
    let Some(cert) = outcome.certificate() else {
        return Ok(Check {
            name: "indicator of [0] locks on 0^∞".into(),
            pass: false,
            detail: format!("not certified: {:?}", outcome.report()),
        });
    };
    let sound = soundness_check(cert, &f, 8)?;
    Ok(Check {
        name: "indicator of [0] locks on 0^∞".into(),
        pass: cert.orbit.repeating_word() == &Word::from_index(0, 1)
            && cert.gap == 1.0
            && cert.tail_bound == 0.0
            && sound.passed,
        detail: format!(
            "level {}, gap {}, tail {}, soundness over {} orbits",
            cert.level, cert.gap, cert.tail_bound, sound.orbits_checked
        ),
    })
}

fn shift_and_scale() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut ok = true;
    for _ in 0..50 {
        let mut t = HaarTable::zero(4);
        for w in (0..4).flat_map(Word::all_of_length) {
            t.set_coefficient(&w, 2.0 * uniform(&mut rng) - 1.0);
        }
        let g = assign_table_weights(&build_graph(4)?, &t)?;
        let base = gap(&g)?.gap;
        let shifted = gap(&assign_table_weights(&build_graph(4)?, &t.shifted(3.5))?)?.gap;
        let scaled = gap(&assign_table_weights(&build_graph(4)?, &t.scaled(2.5))?)?.gap;
        ok &= (shifted - base).abs() <= 1e-12 && (scaled - 2.5 * base).abs() <= 1e-12;
    }
    Ok(Check {
        name: "gap is shift invariant and scale equivariant".into(),
        pass: ok,
        detail: "50 random level-4 tables".into(),
    })
}

fn small_conditional_gap() -> Result<Check> {
    let gauge = Gauge::new(DecayModel::theta(1.0, 0.2)?)?;
    let report = verify_conditional_gap_bound(&Potential::constant(0.0), &gauge, 3, 0.05, 1000, 1, Conditioning::PerTrial)?;
    let row = &report.summary[0];
    Ok(Check {
        name: "conditional gap estimate at n = 3, epsilon = 0.05".into(),
        pass: row.pass,
        detail: format!("rate {}, upper bound {}, bound {}", row.rate, row.upper_99, row.bound),
    })
}

pub fn run_selftest() -> Result<Vec<Check>> {
    let checks = [
        solver_agreement(100),
        birkhoff_identity(20),
        indicator_certificate(),
        shift_and_scale(),
        small_conditional_gap(),
    ];
    checks.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_selftest().unwrap() {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
