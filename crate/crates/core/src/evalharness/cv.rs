//! Cross-validation over a split plan.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::{Property, PseudoLabelConfig, SystemRecord};
use crate::predictor::{training_matrix, ModelSpec, PredictorError};

use super::metrics::{kendall_tau, pearson_r, rmse};
use super::split::{SplitPlan, SplitScheme};
use super::EvalError;

/// A trained model reduced to its prediction function on feature rows.
pub type FittedModel = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Anything that turns training rows and targets into a [`FittedModel`].
pub trait Trainer: Sync {
    fn fit(&self, x: &[Vec<f64>], y: &[f64]) -> Result<FittedModel, PredictorError>;
}

impl<F> Trainer for F
where
    F: Fn(&[Vec<f64>], &[f64]) -> Result<FittedModel, PredictorError> + Sync,
{
    fn fit(&self, x: &[Vec<f64>], y: &[f64]) -> Result<FittedModel, PredictorError> {
        self(x, y)
    }
}

impl Trainer for ModelSpec {
    fn fit(&self, x: &[Vec<f64>], y: &[f64]) -> Result<FittedModel, PredictorError> {
        let model = self.train(x, y)?;
        Ok(Box::new(move |row| {
            model.predict_features(row).unwrap_or(f64::NAN)
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (ddof = 1); 0 for a single value.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Some(Summary { mean, std })
    }

    /// `mean±std`, each to three significant figures.
    pub fn display(&self) -> String {
        format!("{}±{}", sig3(self.mean), sig3(self.std))
    }
}

/// Three significant figures in positional notation.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0.00".into() } else { x.to_string() };
    }
    let sci = format!("{x:.2e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let rounded: f64 = format!("{mantissa}e{exp}").parse().expect("number");
    let decimals = (2 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub rmse: f64,
    /// `None` when undefined (constant predictions or targets).
    pub pearson_r: Option<f64>,
    pub kendall_tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub property: Property,
    pub scheme: SplitScheme,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldMetrics>,
    pub rmse: Summary,
    pub pearson_r: Option<Summary>,
    pub kendall_tau: Option<Summary>,
}

fn optional_summary(values: impl Iterator<Item = Option<f64>>) -> Option<Summary> {
    let v: Vec<f64> = values.flatten().collect();
    Summary::of(&v)
}

impl MetricReport {
    pub const CSV_HEADER: &'static str = "model,property,scheme,rmse,pearson_r,kendall_tau";

    /// One row in the `mean±std` table format.
    pub fn csv_row(&self, model: &str) -> String {
        let show = |s: &Option<Summary>| s.as_ref().map_or("n/a".to_string(), Summary::display);
        format!(
            "{model},{},{},{},{},{}",
            self.property,
            self.scheme,
            self.rmse.display(),
            show(&self.pearson_r),
            show(&self.kendall_tau)
        )
    }
}

/// Trains on the out-of-fold records of each fold and scores the fold.
/// Only records labeled with `property` take part.
pub fn cross_validate(
    records: &[SystemRecord],
    plan: &SplitPlan,
    trainer: &dyn Trainer,
    property: Property,
    features: &PseudoLabelConfig,
) -> Result<MetricReport, EvalError> {
    let (selected, x, y) = training_matrix(records, property, features)?;
    let folds = plan.fold_indices(&selected)?;
    for (fold, idx) in folds.iter().enumerate() {
        if idx.len() < 2 {
            return Err(EvalError::FoldTooSmall {
                fold,
                size: idx.len(),
            });
        }
    }
    let results: Vec<Result<FoldMetrics, EvalError>> = folds
        .par_iter()
        .enumerate()
        .map(|(fold, test)| {
            let mut in_test = vec![false; selected.len()];
            for &i in test {
                in_test[i] = true;
            }
            let train: Vec<usize> = (0..selected.len()).filter(|&i| !in_test[i]).collect();
            let tx: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
            let ty: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let model = trainer.fit(&tx, &ty)?;
            let pred: Vec<f64> = test.iter().map(|&i| model(&x[i])).collect();
            let actual: Vec<f64> = test.iter().map(|&i| y[i]).collect();
            if pred.iter().any(|p| !p.is_finite()) {
                return Err(EvalError::Undefined(format!("non-finite prediction in fold {fold}")));
            }
            Ok(FoldMetrics {
                fold,
                n_train: train.len(),
                n_test: test.len(),
                rmse: rmse(&pred, &actual)?,
                pearson_r: pearson_r(&pred, &actual).ok(),
                kendall_tau: kendall_tau(&pred, &actual).ok(),
            })
        })
        .collect();
    let folds: Vec<FoldMetrics> = results.into_iter().collect::<Result<_, _>>()?;
    let rmse_values: Vec<f64> = folds.iter().map(|f| f.rmse).collect();
    Ok(MetricReport {
        property,
        scheme: plan.scheme,
        k: plan.k,
        seed: plan.seed,
        rmse: Summary::of(&rmse_values).expect("k >= 2 folds"),
        pearson_r: optional_summary(folds.iter().map(|f| f.pearson_r)),
        kendall_tau: optional_summary(folds.iter().map(|f| f.kendall_tau)),
        folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_significant_figures() {
        assert_eq!(sig3(0.12345), "0.123");
        assert_eq!(sig3(1.0), "1.00");
        assert_eq!(sig3(0.9996), "1.00");
        assert_eq!(sig3(123.4), "123");
        assert_eq!(sig3(1234.0), "1230");
        assert_eq!(sig3(-0.004567), "-0.00457");
        let s = Summary::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.display(), "2.00±1.00");
    }
}
