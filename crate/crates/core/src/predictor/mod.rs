//! Baseline property predictors over pseudo-label features: closed-form
//! ridge regression, a feedforward network, and a child-process plug-in.
//!
//! Features are standardized per column with statistics from the training
//! set. Viscosity is stored and modeled in log10 space like every other
//! property's canonical unit, so no target transform is applied here.

mod external;
mod mlp;
mod ridge;
mod standardize;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::{
    build_pseudo_labels, build_pseudo_labels_batch, DatasetError, Property, PseudoLabelConfig,
    SystemRecord, PSEUDO_LABEL_LEN,
};
use crate::descriptors::{fnv1a64, DESCRIPTOR_NAMES};

pub use external::{ExternalPredictor, PROTOCOL_SCHEMA_VERSION};
pub use mlp::{Activation, Mlp, MlpConfig};
pub use standardize::Standardizer;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredictorError {
    #[error("invalid training data: {0}")]
    InvalidData(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("{message}")]
    Singular { message: String },
    #[error("training diverged (non-finite loss) in epoch {epoch}")]
    Diverged { epoch: usize },
    #[error("model predicts {model} but the record is for {record}")]
    PropertyMismatch { model: String, record: String },
    #[error("feature layout mismatch: model expects {expected}, got {found}")]
    LayoutMismatch { expected: String, found: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("could not start external predictor: {0}")]
    ExternalSpawn(String),
    #[error("external predictor exited at record {index}: {status}")]
    ExternalExit { index: usize, status: String },
    #[error("external predictor sent a malformed response for record {index}: {message}")]
    ExternalMalformed { index: usize, message: String },
    #[error("external predictor timed out after {seconds}s on record {index}")]
    ExternalTimeout { index: usize, seconds: f64 },
    #[error("model file {path}: {message}")]
    Io { path: String, message: String },
}

/// Anything that maps system records to property values.
pub trait Predictor: Sync {
    fn predict_batch(&self, records: &[SystemRecord]) -> Result<Vec<f64>, PredictorError>;
}

/// Wraps a closure as a [`Predictor`].
pub struct FnPredictor<F>(pub F);

impl<F> Predictor for FnPredictor<F>
where
    F: Fn(&SystemRecord) -> Result<f64, PredictorError> + Sync,
{
    fn predict_batch(&self, records: &[SystemRecord]) -> Result<Vec<f64>, PredictorError> {
        records.iter().map(&self.0).collect()
    }
}

/// Identifies the meaning of each input column.
pub fn layout_hash(width: usize, features: &PseudoLabelConfig) -> String {
    let text = if width == PSEUDO_LABEL_LEN {
        format!(
            "pseudo-label/v1;slots=cation,anion,solute,solvent;descriptors={};temperature_scale={:e};categories=il_solute,organic_solute,il_bulk_with_T,il_bulk_no_T",
            DESCRIPTOR_NAMES.join(","),
            features.temperature_scale
        )
    } else {
        format!("raw/v1;width={width}")
    };
    format!("{:016x}", fnv1a64(text.as_bytes()))
}

/// Input features for the baselines: the record's pseudo-label vector.
pub fn featurize_record(
    record: &SystemRecord,
    features: &PseudoLabelConfig,
) -> Result<Vec<f64>, PredictorError> {
    Ok(build_pseudo_labels(record, features)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetScale {
    pub mean: f64,
    pub scale: f64,
}

impl TargetScale {
    const IDENTITY: TargetScale = TargetScale {
        mean: 0.0,
        scale: 1.0,
    };

    fn fit(y: &[f64]) -> TargetScale {
        let n = y.len() as f64;
        let mean = y.iter().sum::<f64>() / n;
        let sd = (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        TargetScale {
            mean,
            scale: if sd > 1e-12 { sd } else { 1.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelKind {
    /// Weights act on standardized features.
    Ridge {
        weights: Vec<f64>,
        bias: f64,
        lambda: f64,
    },
    Mlp(Mlp),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub schema_version: u32,
    pub property: Option<Property>,
    pub features: PseudoLabelConfig,
    pub layout_hash: String,
    pub standardizer: Standardizer,
    pub target: TargetScale,
    pub model: ModelKind,
}

fn check_training_data(x: &[Vec<f64>], y: &[f64]) -> Result<usize, PredictorError> {
    if x.is_empty() || x.len() != y.len() {
        return Err(PredictorError::InvalidData(format!(
            "{} feature rows and {} targets; need at least one of each and equal counts",
            x.len(),
            y.len()
        )));
    }
    let width = x[0].len();
    for (i, row) in x.iter().enumerate() {
        if row.len() != width {
            return Err(PredictorError::InvalidData(format!(
                "row {i} has width {}, expected {width}",
                row.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(PredictorError::InvalidData(format!("row {i} has non-finite features")));
        }
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(PredictorError::InvalidData(format!("target {i} is not finite")));
    }
    Ok(width)
}

impl RegressionModel {
    fn new(width: usize, standardizer: Standardizer, target: TargetScale, model: ModelKind) -> Self {
        let features = PseudoLabelConfig::default();
        RegressionModel {
            schema_version: MODEL_SCHEMA_VERSION,
            property: None,
            layout_hash: layout_hash(width, &features),
            features,
            standardizer,
            target,
            model,
        }
    }

    pub fn with_property(mut self, property: Property) -> Self {
        self.property = Some(property);
        self
    }

    pub fn with_features(mut self, features: PseudoLabelConfig) -> Self {
        self.layout_hash = layout_hash(self.input_width(), &features);
        self.features = features;
        self
    }

    pub fn input_width(&self) -> usize {
        self.standardizer.width()
    }

    /// Prediction for one raw (unstandardized) feature vector.
    pub fn predict_features(&self, x: &[f64]) -> Result<f64, PredictorError> {
        if x.len() != self.input_width() {
            return Err(PredictorError::LayoutMismatch {
                expected: format!("{} features", self.input_width()),
                found: format!("{} features", x.len()),
            });
        }
        let z = self.standardizer.apply(x);
        let raw = match &self.model {
            ModelKind::Ridge { weights, bias, .. } => {
                bias + weights.iter().zip(&z).map(|(w, v)| w * v).sum::<f64>()
            }
            ModelKind::Mlp(net) => net.forward(&z),
        };
        Ok(raw * self.target.scale + self.target.mean)
    }

    /// Ridge weights and bias in the original feature units.
    pub fn linear_coefficients(&self) -> Option<(Vec<f64>, f64)> {
        let ModelKind::Ridge { weights, bias, .. } = &self.model else {
            return None;
        };
        let s = &self.standardizer;
        let w: Vec<f64> = weights
            .iter()
            .zip(&s.scale)
            .map(|(w, sc)| w / sc * self.target.scale)
            .collect();
        let b = (bias - weights.iter().zip(&s.mean).zip(&s.scale).map(|((w, m), sc)| w * m / sc).sum::<f64>())
            * self.target.scale
            + self.target.mean;
        Some((w, b))
    }

    fn check_record(&self, record: &SystemRecord) -> Result<(), PredictorError> {
        let Some(p) = self.property else {
            return Ok(());
        };
        let mismatch = |found: String| PredictorError::PropertyMismatch {
            model: p.to_string(),
            record: found,
        };
        if let Some(rp) = record.property {
            if rp != p {
                return Err(mismatch(rp.to_string()));
            }
        }
        if !p.allowed_categories().contains(&record.category) {
            return Err(mismatch(format!("category {}", record.category)));
        }
        Ok(())
    }

    pub fn predict(&self, record: &SystemRecord) -> Result<f64, PredictorError> {
        self.check_record(record)?;
        self.predict_features(&featurize_record(record, &self.features)?)
    }

    /// Checks schema version, parameter shapes and layout hash.
    pub fn validate(&self) -> Result<(), PredictorError> {
        if self.schema_version != MODEL_SCHEMA_VERSION {
            return Err(PredictorError::InvalidModel(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let width = self.input_width();
        if self.standardizer.scale.len() != width || self.standardizer.scale.iter().any(|s| !(*s > 0.0)) {
            return Err(PredictorError::InvalidModel("bad standardization".into()));
        }
        match &self.model {
            ModelKind::Ridge { weights, .. } if weights.len() != width => {
                return Err(PredictorError::InvalidModel("ridge weights do not match width".into()));
            }
            ModelKind::Mlp(net) => {
                net.check_shapes()?;
                if net.input_width() != width {
                    return Err(PredictorError::InvalidModel("network input does not match width".into()));
                }
            }
            _ => {}
        }
        let expected = layout_hash(width, &self.features);
        if expected != self.layout_hash {
            return Err(PredictorError::LayoutMismatch {
                expected,
                found: self.layout_hash.clone(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PredictorError> {
        let m: RegressionModel =
            serde_json::from_str(text).map_err(|e| PredictorError::InvalidModel(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), PredictorError> {
        std::fs::write(path, self.to_json()).map_err(|e| PredictorError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, PredictorError> {
        let text = std::fs::read_to_string(path).map_err(|e| PredictorError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }
}

impl Predictor for RegressionModel {
    fn predict_batch(&self, records: &[SystemRecord]) -> Result<Vec<f64>, PredictorError> {
        for r in records {
            self.check_record(r)?;
        }
        let x = build_pseudo_labels_batch(records, &self.features)?;
        x.par_iter().map(|row| self.predict_features(row)).collect()
    }
}

/// Ridge regression on standardized features with an unpenalized bias.
pub fn train_ridge(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<RegressionModel, PredictorError> {
    let width = check_training_data(x, y)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(PredictorError::InvalidConfig(format!("lambda must be >= 0, got {lambda}")));
    }
    let standardizer = Standardizer::fit(x);
    let z: Vec<Vec<f64>> = x.iter().map(|r| standardizer.apply(r)).collect();
    let (weights, bias) = ridge::solve(&z, y, lambda)?;
    Ok(RegressionModel::new(
        width,
        standardizer,
        TargetScale::IDENTITY,
        ModelKind::Ridge {
            weights,
            bias,
            lambda,
        },
    ))
}

/// `‖(ZᵀZ + λI)w − Zᵀy‖∞` for a ridge model on its standardized features.
pub fn ridge_normal_residual(model: &RegressionModel, x: &[Vec<f64>], y: &[f64]) -> Option<f64> {
    let ModelKind::Ridge { weights, lambda, .. } = &model.model else {
        return None;
    };
    let z: Vec<Vec<f64>> = x.iter().map(|r| model.standardizer.apply(r)).collect();
    let (a, rhs) = ridge::normal_system(&z, y, *lambda);
    let w = nalgebra::DVector::from_column_slice(weights);
    Some((a * w - rhs).amax())
}

/// Trains the network and returns it with the per-epoch mean training loss.
pub fn train_mlp(
    x: &[Vec<f64>],
    y: &[f64],
    config: &MlpConfig,
) -> Result<(RegressionModel, Vec<f64>), PredictorError> {
    let width = check_training_data(x, y)?;
    config.validate()?;
    if x.len() < config.batch_size {
        return Err(PredictorError::InvalidData(format!(
            "{} samples is fewer than the batch size {}",
            x.len(),
            config.batch_size
        )));
    }
    let standardizer = Standardizer::fit(x);
    let target = if config.standardize_target {
        TargetScale::fit(y)
    } else {
        TargetScale::IDENTITY
    };
    let z: Vec<Vec<f64>> = x.iter().map(|r| standardizer.apply(r)).collect();
    let t: Vec<f64> = y.iter().map(|v| (v - target.mean) / target.scale).collect();
    let mut sizes = vec![width];
    sizes.extend(&config.hidden);
    sizes.push(1);
    let init = Mlp::init(&sizes, config.activation, config.seed);
    let (net, trace) = mlp::train(init, &z, &t, config)?;
    Ok((
        RegressionModel::new(width, standardizer, target, ModelKind::Mlp(net)),
        trace,
    ))
}

/// Model family and hyperparameters, as read from configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Ridge { lambda: f64 },
    Mlp(MlpConfig),
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec::Mlp(MlpConfig::default())
    }
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Ridge { .. } => "ridge",
            ModelSpec::Mlp(_) => "mlp",
        }
    }

    pub fn train(&self, x: &[Vec<f64>], y: &[f64]) -> Result<RegressionModel, PredictorError> {
        match self {
            ModelSpec::Ridge { lambda } => train_ridge(x, y, *lambda),
            ModelSpec::Mlp(cfg) => Ok(train_mlp(x, y, cfg)?.0),
        }
    }
}

/// Labeled records for one property with their feature rows.
pub fn training_matrix(
    records: &[SystemRecord],
    property: Property,
    features: &PseudoLabelConfig,
) -> Result<(Vec<SystemRecord>, Vec<Vec<f64>>, Vec<f64>), PredictorError> {
    let selected: Vec<SystemRecord> = records
        .iter()
        .filter(|r| r.property == Some(property) && r.value.is_some())
        .cloned()
        .collect();
    let x = build_pseudo_labels_batch(&selected, features)?;
    let y = selected.iter().map(|r| r.value.unwrap_or_default()).collect();
    Ok((selected, x, y))
}

/// Trains a per-property model on the labeled records for `property`.
pub fn train_on_records(
    records: &[SystemRecord],
    property: Property,
    spec: &ModelSpec,
    features: &PseudoLabelConfig,
) -> Result<RegressionModel, PredictorError> {
    let (_, x, y) = training_matrix(records, property, features)?;
    Ok(spec
        .train(&x, &y)?
        .with_features(*features)
        .with_property(property))
}
