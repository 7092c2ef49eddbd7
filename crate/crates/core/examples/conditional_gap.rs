//! Empirical check of P(Gap_n ≤ 2^{-n} b_{n-1} ε) ≤ 2^n ε.

use shift_lock::haar::Potential;
use shift_lock::prevalence::{verify_conditional_gap_bound, Conditioning, Gauge};
use shift_lock::symbolic::DecayModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauge = Gauge::new(DecayModel::theta(1.0, 0.2)?)?;
    let f0 = Potential::constant(0.0);
    for conditioning in [Conditioning::PerTrial, Conditioning::PerBlock { block_size: 100 }] {
        for (n, eps) in [(2, 0.1), (3, 0.05), (4, 0.01)] {
            let r = verify_conditional_gap_bound(&f0, &gauge, n, eps, 2000, 7, conditioning)?;
            let row = &r.summary[0];
            println!(
                "{conditioning:?} n={n} eps={eps}: rate {:.4}, 99% upper {:.4}, bound {:.3}, pass {}",
                row.rate, row.upper_99, row.bound, row.pass
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
