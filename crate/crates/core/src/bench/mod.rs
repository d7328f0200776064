//! Experiment harness: error metrics, multi-seed runs, grid sweeps and the
//! artifacts they write (learning curves, summaries, weight histograms,
//! clause listings, model files).

mod experiment;
mod histogram;
pub mod metrics;
mod model_file;
mod report;
mod sweep;

pub use crate::engine::{EpochMetrics, RunReport};
pub use experiment::{
    epoch_metrics_csv, final_summary_csv, run_experiment, run_experiment_on, write_artifacts,
    Aggregate, ExperimentConfig, ExperimentOutcome, SeedRun,
};
pub use histogram::{weight_histogram, WeightHistogram};
pub use metrics::mae;
pub use model_file::{load_model, save_model, ModelFile, MODEL_FORMAT};
pub use report::{clause_lines, clause_report, literal_name};
pub use sweep::{run_sweep, sweep_summary_csv, GridConfig, SweepCell};
