//! Locking certificates for random perturbations f0 + g, g drawn from a
//! Hilbert brick.

use shift_lock::haar::{HaarTable, Potential};
use shift_lock::prevalence::{prevalence_experiment, sample_brick, Gauge, PerturbedPotential};
use shift_lock::certify::find_locking_level;
use shift_lock::symbolic::{DecayModel, Word};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauge = Gauge::new(DecayModel::theta(1.0, 0.2)?)?;
    let mut t = HaarTable::zero(2);
    for w in (0..2).flat_map(Word::all_of_length) {
        t.set_coefficient(&w, 1.0);
    }
    let f0 = Potential::StepTable(t);

    let g = sample_brick(&gauge, 5, 2024)?;
    let search = find_locking_level(&PerturbedPotential::new(&f0, &g), &gauge.model, 5)?;
    for row in &search.trace {
        println!("level {}: gap {:.3e} tail {:.3e}", row.level, row.gap, row.tail_bound);
    }
    if let Some(c) = search.certificate {
        println!("sample 2024 locks on {} at level {}", c.orbit, c.level);
    }

    for n_max in [4, 5, 6] {
        let r = prevalence_experiment(&f0, &gauge, n_max, 100, 1)?;
        let p = r.prevalence.as_ref().ok_or("prevalence summary")?;
        println!(
            "n_max {n_max}: certified {}/{} ({:?}), levels {:?}",
            p.certified, p.samples, p.certified_fraction, p.level_histogram
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
