//! Maximum mean cycles, the cycle-enumeration oracle, and Gap_n.

mod enumerate;
mod gap;
mod karp;

pub use enumerate::{enumerate_cycles, MAX_ENUMERATED_CYCLES};
pub use gap::{gap, gap_by_enumeration, GapResult};
pub use karp::{max_mean_cycle_excluding, max_mean_cycle_karp, MeanCycleResult, Method, MAX_KARP_CELLS};
