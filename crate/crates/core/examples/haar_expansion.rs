//! Haar coefficients of a step function and the averages A_n f.

use shift_lock::haar::{CylinderValues, HaarTable, Potential};
use shift_lock::symbolic::Word;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let values = CylinderValues::new(vec![3.0, 1.0, 0.0, 0.5])?;
    let table = HaarTable::from_cylinder_values(&values)?;
    println!("mean {}", table.constant_term());
    for w in (0..table.max_level()).flat_map(Word::all_of_length) {
        println!("c_{w} = {}", table.coefficient(&w));
    }
    println!("A_1 f on [0], [1]: {:?}", table.cylinder_values(1).values);
    println!("round trip: {:?}", table.cylinder_values(2).values);

    let f = Potential::CylinderValues(values);
    for k in 0..3 {
        println!("max |c_w| at level {k} ≤ {}", f.coefficient_sup_bound(k)?);
    }
    println!("{}", serde_json::to_string(&table)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
