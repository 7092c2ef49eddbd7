//! Haar functions on the Cantor set, finite Haar expansions, and potentials.

mod potential;
mod table;

pub use potential::{Approximation, Evaluator, Potential, PotentialSpec, MAX_POTENTIAL_LEVEL};
pub use table::{haar_evaluate, CylinderValues, HaarTable};
