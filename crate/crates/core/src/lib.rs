pub mod certify;
pub mod cli;
pub mod debruijn;
pub mod digraph;
pub mod error;
pub mod haar;
pub mod mean_cycle;
pub mod prevalence;
pub mod selftest;
pub mod stats;
pub mod symbolic;
