//! Paired-seed experiment harness: configuration, the sweep runner, metric
//! records, and report emission.

pub mod config;
pub mod record;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, ModelId, ThreadMode, DATA_PATH_ENV};
pub use record::{MetricRecord, LOWER_IS_BETTER, RECORD_COLUMNS};
pub use report::{aggregate_mean_se, delta_vs_best_baseline, emit_reports, DeltaSummary};
pub use runner::{reaggregate, run_config};
