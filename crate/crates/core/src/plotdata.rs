//! Plain data files behind the usual result figures: per-model rank
//! tables, clustered similarity matrices and label histograms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::datasets::{format_float, Property, SystemRecord};
use crate::evalharness::ModelRank;
use crate::fingerprints::{hierarchical_cluster, Dendrogram, FingerprintError};

/// CSV with one row per model: the rank on each dataset and the average.
pub fn rank_table_csv(ranks: &[ModelRank], datasets: &[String]) -> String {
    let mut out = String::from("model");
    for d in datasets {
        out.push(',');
        out.push_str(d);
    }
    out.push_str(",average\n");
    for r in ranks {
        out.push_str(&r.model);
        for v in &r.per_dataset {
            let _ = write!(out, ",{}", format_float(*v));
        }
        let _ = writeln!(out, ",{}", format_float(r.average));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` ascending bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over the data range; the last bin is closed. A
    /// constant sample gets a unit-width range centred on its value.
    pub fn of(values: &[f64], bins: usize) -> Histogram {
        let bins = bins.max(1);
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            return Histogram {
                edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
                counts: vec![0; bins],
            };
        }
        let mut lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0; bins];
        for v in finite {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lower,upper,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{c}",
                format_float(self.edges[k]),
                format_float(self.edges[k + 1])
            );
        }
        out
    }
}

/// One histogram of labeled values per property present in `records`.
pub fn label_histograms(records: &[SystemRecord], bins: usize) -> BTreeMap<Property, Histogram> {
    let mut by_property: BTreeMap<Property, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let (Some(p), Some(v)) = (r.property, r.value) {
            by_property.entry(p).or_default().push(v);
        }
    }
    by_property
        .into_iter()
        .map(|(p, v)| (p, Histogram::of(&v, bins)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPlot {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub dendrogram: Dendrogram,
}

impl SimilarityPlot {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<SimilarityPlot, FingerprintError> {
        if labels.len() != matrix.len() {
            return Err(FingerprintError::InvalidMatrix(format!(
                "{} labels for a {}-row matrix",
                labels.len(),
                matrix.len()
            )));
        }
        let dendrogram = hierarchical_cluster(&matrix)?;
        Ok(SimilarityPlot {
            labels,
            matrix,
            dendrogram,
        })
    }

    /// Matrix as CSV with a label header row and label column, in input order.
    pub fn matrix_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            let _ = write!(out, ",{}", csv_field(l));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.matrix) {
            out.push_str(&csv_field(l));
            for v in row {
                let _ = write!(out, ",{}", format_float(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Leaf order of the dendrogram: `position,index,label`.
    pub fn order_csv(&self) -> String {
        let mut out = String::from("position,index,label\n");
        for (pos, &i) in self.dendrogram.leaf_order.iter().enumerate() {
            let _ = writeln!(out, "{pos},{i},{}", csv_field(&self.labels[i]));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
