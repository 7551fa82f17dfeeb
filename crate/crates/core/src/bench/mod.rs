//! Sequential-task orchestration and continual-learning metrics.

pub mod metrics;
mod profile;
mod sequence;

pub use metrics::{MetricsReport, Summary, SummaryRow};
pub use profile::{baseline_from_csv, baseline_to_csv, DegradationProfile};
pub use sequence::{run_sequence, ModelAdapter, SequenceRun};
