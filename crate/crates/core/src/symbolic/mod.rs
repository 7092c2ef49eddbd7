//! Words over {0, 1}, periodic points, the metric d_a and its decay models.

mod decay;
mod periodic;
mod variation;
mod word;

pub use decay::{metric_d_a, DecayModel, MetricValue};
pub use periodic::{least_rotation, lyndon_words, primitive_root, PeriodicPoint};
pub use variation::variation_of_step_table;
pub(crate) use variation::level_of_table;
pub use word::{first_disagreement, Disagreement, Word};
