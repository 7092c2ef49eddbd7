//! Runs every example end to end.

#[path = "../examples/words_and_metric.rs"]
mod words_and_metric;
#[path = "../examples/haar_expansion.rs"]
mod haar_expansion;
#[path = "../examples/de_bruijn_weights.rs"]
mod de_bruijn_weights;
#[path = "../examples/max_mean_cycle.rs"]
mod max_mean_cycle;
#[path = "../examples/certify_locking.rs"]
mod certify_locking;
#[path = "../examples/conditional_gap.rs"]
mod conditional_gap;
#[path = "../examples/level_bound.rs"]
mod level_bound;
#[path = "../examples/prevalence.rs"]
mod prevalence;

#[test]
fn words_and_metric_runs() {
    words_and_metric::run_example().unwrap();
}

#[test]
fn haar_expansion_runs() {
    haar_expansion::run_example().unwrap();
}

#[test]
fn de_bruijn_weights_runs() {
    de_bruijn_weights::run_example().unwrap();
}

#[test]
fn max_mean_cycle_runs() {
    max_mean_cycle::run_example().unwrap();
}

#[test]
fn certify_locking_runs() {
    certify_locking::run_example().unwrap();
}

#[test]
fn conditional_gap_runs() {
    conditional_gap::run_example().unwrap();
}

#[test]
fn level_bound_runs() {
    level_bound::run_example().unwrap();
}

#[test]
fn prevalence_runs() {
    prevalence::run_example().unwrap();
}
