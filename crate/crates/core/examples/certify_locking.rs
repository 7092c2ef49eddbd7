//! Level search for a locking certificate, then the brute-force soundness
//! check over short periodic orbits.

use shift_lock::certify::{find_locking_level, soundness_check};
use shift_lock::haar::{Evaluator, HaarTable, Potential};
use shift_lock::symbolic::{DecayModel, Word};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = DecayModel::theta(1.0, 0.2)?;

    let indicator = Potential::cylinder_indicator(&"0".parse()?);
    let search = find_locking_level(&indicator, &model, 4)?;
    let cert = search.certificate.as_ref().ok_or("indicator should certify")?;
    println!("1_[0]: {} at level {}, gap {}, tail {}", cert.measure, cert.level, cert.gap, cert.tail_bound);
    let sound = soundness_check(cert, &indicator, 8)?;
    println!("  soundness over {} orbits: {}", sound.orbits_checked, sound.passed);

    let mut t = HaarTable::zero(2);
    t.set_coefficient(&"0".parse()?, 1.0);
    t.set_coefficient(&"1".parse()?, -1.0);
    for row in find_locking_level(&Potential::StepTable(t), &model, 3)?.trace {
        println!("h_0 - h_1 level {}: gap {} tail {} tie {}", row.level, row.gap, row.tail_bound, row.tie);
    }

    // a Lipschitz potential known through its values at periodic points;
    // var_n(f) ≤ 2.4·2^{-n} for every n
    let dyadic = DecayModel::dyadic();
    let f = Evaluator::new("x_1 x_2 - x_3/5 + sum 4^-k x_k", dyadic.clone(), 2.4, 12, |u: &Word| {
        let x = u.periodic_prefix(30);
        let s = |i| x.get(i).unwrap() as f64;
        s(0) * s(1) - 0.2 * s(2) + (3..30).map(|i| 0.25f64.powi(i as i32 + 1) * s(i)).sum::<f64>()
    })?;
    let f = Potential::Evaluator(f);
    let search = find_locking_level(&f, &dyadic, 8)?;
    for row in &search.trace {
        println!("evaluator level {}: gap {:.5} tail {:.5} margin {:+.5}", row.level, row.gap, row.tail_bound, row.margin);
    }
    if let Some(cert) = &search.certificate {
        println!("  locks on {}", cert.orbit);
        println!("{}", serde_json::to_string_pretty(cert)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
