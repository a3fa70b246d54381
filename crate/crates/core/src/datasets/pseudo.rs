//! Pseudo-label vectors: 21 descriptors for each of the four role slots,
//! a scaled temperature and the category one-hot.
//!
//! Layout: `[cation 0..21 | anion 21..42 | solute 42..63 | solvent 63..84 | T 84 | one-hot 85..89]`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chem::parse_smiles;
use crate::descriptors::{compute_descriptors, DESCRIPTOR_COUNT};

use super::{DatasetError, Role, SystemRecord};

pub const PSEUDO_LABEL_LEN: usize = 4 * DESCRIPTOR_COUNT + 1 + 4;
pub const TEMPERATURE_INDEX: usize = 4 * DESCRIPTOR_COUNT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoLabelConfig {
    /// Multiplier applied to the temperature in kelvin.
    pub temperature_scale: f64,
}

impl Default for PseudoLabelConfig {
    fn default() -> Self {
        PseudoLabelConfig {
            temperature_scale: 1e-3,
        }
    }
}

fn descriptors_of(smiles: &str) -> Result<[f64; DESCRIPTOR_COUNT], DatasetError> {
    let mol = parse_smiles(smiles)
        .map_err(|e| DatasetError::Invalid(format!("'{smiles}': {e}")))?;
    Ok(compute_descriptors(&mol)?.to_array())
}

fn assemble(
    record: &SystemRecord,
    config: &PseudoLabelConfig,
    lookup: &dyn Fn(&str) -> Result<[f64; DESCRIPTOR_COUNT], DatasetError>,
) -> Result<Vec<f64>, DatasetError> {
    let mut v = vec![0.0; PSEUDO_LABEL_LEN];
    for (slot, role) in Role::ORDER.into_iter().enumerate() {
        if let Some(s) = record.role(role) {
            let d = lookup(s)?;
            v[slot * DESCRIPTOR_COUNT..(slot + 1) * DESCRIPTOR_COUNT].copy_from_slice(&d);
        }
    }
    v[TEMPERATURE_INDEX] = record.temperature.map_or(0.0, |t| t * config.temperature_scale);
    v[TEMPERATURE_INDEX + 1..].copy_from_slice(&record.category.one_hot());
    Ok(v)
}

pub fn build_pseudo_labels(
    record: &SystemRecord,
    config: &PseudoLabelConfig,
) -> Result<Vec<f64>, DatasetError> {
    assemble(record, config, &descriptors_of)
}

/// Pseudo-labels for many records, computing descriptors once per distinct
/// molecule.
pub fn build_pseudo_labels_batch(
    records: &[SystemRecord],
    config: &PseudoLabelConfig,
) -> Result<Vec<Vec<f64>>, DatasetError> {
    let mut unique: Vec<&str> = records
        .iter()
        .flat_map(|r| r.roles().into_iter().flatten())
        .collect();
    unique.sort_unstable();
    unique.dedup();
    let computed: Vec<_> = unique.par_iter().map(|s| descriptors_of(s)).collect();
    let mut cache = HashMap::with_capacity(unique.len());
    for (s, d) in unique.into_iter().zip(computed) {
        cache.insert(s, d?);
    }
    let lookup = |s: &str| Ok(cache[s]);
    records.iter().map(|r| assemble(r, config, &lookup)).collect()
}
