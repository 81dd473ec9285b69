//! Evaluation: correlation and accuracy metrics, threshold calibration,
//! report tables and the benchmark runner.

mod bench;
mod metrics;
mod report;

pub use bench::{load_stopwords, run_benchmark, BenchConfig, BenchError, DatasetPaths, Method, MethodKind, MethodSpec};
pub use metrics::{
    accuracy, average_ranks, calibrate_scores, compensated_sum, pearson, spearman, threshold_candidates,
    MetricError,
};
pub use report::{Cell, Column, ReportRow, ReportTable};

use crate::datasets::GoldLabel;

/// A method's prediction for one record next to its gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub id: String,
    pub predicted: f64,
    pub gold: GoldLabel,
}

/// Threshold calibration over scored pairs whose gold labels are binary.
pub fn calibrate_threshold(train: &[ScoredPair]) -> Result<f64, MetricError> {
    let scored = train
        .iter()
        .map(|p| {
            p.gold
                .as_binary()
                .map(|g| (p.predicted, g))
                .ok_or_else(|| MetricError::NotBinary(p.id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    calibrate_scores(&scored)
}
