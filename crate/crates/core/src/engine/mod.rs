//! The regression Tsetlin machine: prediction, feedback dispatch, clause
//! weight learning and the epoch loop, for the unity-weight, integer-weight
//! and real-weight variants.

mod cache;
mod feedback;
mod model;
mod params;
mod train;
mod weights;

pub use feedback::{
    activation_probability, clause_activation, feedback_type, select_type_ia, select_type_ib,
    select_type_ii, Feedback,
};
pub use model::RtmModel;
pub use params::{
    EmptyClausePolicy, RealWeightRule, RtmParams, Variant, DEFAULT_ALPHA, DEFAULT_N_STATES,
    DEFAULT_SPECIFICITY,
};
pub use train::{fit, EpochMetrics, RunReport, StepTrace};
pub use weights::{update_weights_integer, update_weights_real, WeightKind, WeightVector};
