//! Empirical check of P(Gap_n ≤ 4^{-n} n^{-3} b_{n-1}) ≤ n^{-3}, and the
//! level from which each sample stays above its threshold.

use std::collections::BTreeMap;

use shift_lock::haar::Potential;
use shift_lock::prevalence::{verify_level_bound, Gauge};
use shift_lock::symbolic::DecayModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauge = Gauge::new(DecayModel::theta(1.0, 0.2)?)?;
    let r = verify_level_bound(&Potential::constant(0.0), &gauge, 2, 5, 1000, 11)?;
    for row in &r.summary {
        println!(
            "n={} threshold {:.3e}: rate {:.4}, 99% upper {:.4}, bound {:.4}, pass {}",
            row.n, row.threshold, row.rate, row.upper_99, row.bound, row.pass
        );
    }
    let mut onward = BTreeMap::new();
    for rec in r.trials.iter().filter(|t| t.n == Some(2)) {
        *onward.entry(rec.onward_level).or_insert(0) += 1;
    }
    println!("samples by onward level: {onward:?}");
    println!("{}", r.regime.description);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
