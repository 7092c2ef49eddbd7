//! The weighted de Bruijn graph of a potential and the orbit of a cycle.

use shift_lock::debruijn::{assign_weights, build_graph, cycle_to_periodic_point};
use shift_lock::haar::{CylinderValues, Potential};
use shift_lock::mean_cycle::enumerate_cycles;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = Potential::CylinderValues(CylinderValues::new(vec![1.0, -0.5, 0.25, 0.0])?);
    let n = 3;
    let g = assign_weights(&build_graph(n)?, &f)?;
    for a in 0..g.n_arcs() {
        println!("{} : {} -> {}  weight {:+.4}", g.arc_label(a), g.tail(a), g.head(a), g.weight(a));
    }
    let (table, _) = f.haar_table(n)?;
    let averages = table.cylinder_values(n);
    for (cycle, mean) in enumerate_cycles(&g)? {
        let orbit = cycle_to_periodic_point(&g, &cycle)?;
        let avg = orbit.orbit_average(n, |w| averages.values[w.index() as usize]);
        println!(
            "cycle {:?}: mean {mean:+.4}, + constant = {:+.4}, orbit {orbit} average of A_n f = {avg:+.4}",
            cycle.labels(&g),
            mean + table.constant_term()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
