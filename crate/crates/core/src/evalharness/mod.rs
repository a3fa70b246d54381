//! Group k-fold cross-validation, regression metrics and rank aggregation.

mod cv;
mod metrics;
mod rank;
mod split;

pub use cv::{cross_validate, sig3, FittedModel, FoldMetrics, MetricReport, Summary, Trainer};
pub use metrics::{kendall_tau, pearson_r, rmse};
pub use rank::{fractional_ranks, rank_aggregate, DatasetTable, MetricMeans, ModelRank};
pub use split::{make_split, SplitPlan, SplitScheme};

use crate::predictor::PredictorError;

pub const DEFAULT_FOLDS: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {required} points, got {found}")]
    TooFewPoints { found: usize, required: usize },
    #[error("metric undefined: {0}")]
    Undefined(String),
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("fewer distinct groups than k ({groups} groups, k = {k})")]
    NotEnoughGroups { groups: usize, k: usize },
    #[error("record {index} has no group key under the {scheme} scheme")]
    MissingGroupKey { index: usize, scheme: &'static str },
    #[error("record {index} is not covered by the split plan")]
    UncoveredRecord { index: usize },
    #[error("fold {fold} has {size} test points; at least 2 are needed")]
    FoldTooSmall { fold: usize, size: usize },
    #[error("model {model} has no entry for dataset {dataset}")]
    MissingCell { model: String, dataset: String },
    #[error(transparent)]
    Predictor(#[from] PredictorError),
}
