//! Words, periodic points and the metric d_a.

use shift_lock::symbolic::{first_disagreement, lyndon_words, metric_d_a, DecayModel, PeriodicPoint, Word};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let x: Word = "0111".parse()?;
    let y: Word = "0000".parse()?;
    let dyadic = DecayModel::dyadic();
    println!("{x} vs {y}: {:?}, d = {:?}", first_disagreement(&x, &y)?, metric_d_a(&dyadic, &x, &y)?);

    let theta = DecayModel::theta(1.0, 0.2)?;
    for n in 1..=4 {
        println!("a_{n} = {:e}, tail bound from {n} = {:e}", theta.a(n), theta.tail_sum_bound(n)?);
    }

    let p = PeriodicPoint::canonical("110".parse()?)?;
    println!("orbit {p} has period {}", p.period());
    let blocks: Vec<String> = lyndon_words(5).iter().map(Word::to_string).collect();
    println!("{} periodic orbits of period ≤ 5: {}", blocks.len(), blocks.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
