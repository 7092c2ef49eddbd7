//! Karp's maximum mean cycle, the runner-up by arc deletion, and the
//! enumeration cross-check.

use shift_lock::digraph::WeightedDigraph;
use shift_lock::mean_cycle::{enumerate_cycles, gap, gap_by_enumeration, max_mean_cycle_karp};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = WeightedDigraph::new(
        4,
        &[(0, 1, 2.0), (1, 0, 0.0), (1, 2, 1.5), (2, 3, 1.0), (3, 1, 2.0), (2, 2, 1.2), (3, 0, -1.0)],
    )?;
    let best = max_mean_cycle_karp(&g)?;
    println!("max mean {} on arcs {:?}", best.max_mean, best.witness_cycle.arcs());

    let r = gap(&g)?;
    println!("runner-up {} on arcs {:?}, gap {}", r.second_mean, r.second_witness.arcs(), r.gap);
    println!("enumeration gap {}", gap_by_enumeration(&g)?.gap);
    for (c, m) in enumerate_cycles(&g)? {
        println!("  {:?} mean {m}", c.arcs());
    }
    println!("{}", serde_json::to_string(&g.to_json())?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
