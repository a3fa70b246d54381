//! Average rank of models across datasets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricMeans {
    pub rmse: f64,
    pub pearson_r: f64,
    pub kendall_tau: f64,
}

/// Metric means of every model on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetTable {
    pub dataset: String,
    pub models: BTreeMap<String, MetricMeans>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRank {
    pub model: String,
    /// Mean of the three metric ranks on each dataset, in input order.
    pub per_dataset: Vec<f64>,
    pub average: f64,
}

/// 1-based ranks; equal values share the mean of their positions.
pub fn fractional_ranks(values: &[f64], descending: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let o = values[a].total_cmp(&values[b]);
        if descending {
            o.reverse()
        } else {
            o
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

/// Ranks models within each dataset by RMSE (ascending) and Pearson r and
/// Kendall tau (descending), averages the three ranks, then averages over
/// datasets. Results are sorted by average rank, then model name.
pub fn rank_aggregate(tables: &[DatasetTable]) -> Result<Vec<ModelRank>, EvalError> {
    let models: Vec<String> = {
        let mut all: Vec<String> = tables.iter().flat_map(|t| t.models.keys().cloned()).collect();
        all.sort();
        all.dedup();
        all
    };
    let mut per_dataset = vec![Vec::with_capacity(tables.len()); models.len()];
    for t in tables {
        let mut cells = Vec::with_capacity(models.len());
        for m in &models {
            let cell = t.models.get(m).ok_or_else(|| EvalError::MissingCell {
                model: m.clone(),
                dataset: t.dataset.clone(),
            })?;
            cells.push(*cell);
        }
        let r1 = fractional_ranks(&cells.iter().map(|c| c.rmse).collect::<Vec<_>>(), false);
        let r2 = fractional_ranks(&cells.iter().map(|c| c.pearson_r).collect::<Vec<_>>(), true);
        let r3 = fractional_ranks(&cells.iter().map(|c| c.kendall_tau).collect::<Vec<_>>(), true);
        for i in 0..models.len() {
            per_dataset[i].push((r1[i] + r2[i] + r3[i]) / 3.0);
        }
    }
    let mut out: Vec<ModelRank> = models
        .into_iter()
        .zip(per_dataset)
        .map(|(model, ranks)| {
            let average = if ranks.is_empty() {
                0.0
            } else {
                ranks.iter().sum::<f64>() / ranks.len() as f64
            };
            ModelRank {
                model,
                per_dataset: ranks,
                average,
            }
        })
        .collect();
    out.sort_by(|a, b| a.average.total_cmp(&b.average).then_with(|| a.model.cmp(&b.model)));
    Ok(out)
}
