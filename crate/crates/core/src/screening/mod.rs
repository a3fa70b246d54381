//! Free-energy cycle relations, Top-K seeding, similarity-gated beam search
//! and the anion/cation modification loops.

mod search;
mod thermo;

use std::collections::BTreeMap;

pub use search::{
    beam_search, modify_anion, modify_side_chain, role_key, top_k_seeds, Candidate,
    LookupPredictor, Objective, Provenance, RolePool, SearchConfig, SearchResult, TopK,
    DEFAULT_BUDGET,
};
pub use thermo::{averaged_hydration, hydration_dg, il_organic_transfer, TRANSFER_SIGN};

use crate::datasets::{Role, SystemRecord};
use crate::fingerprints::FingerprintError;
use crate::predictor::{Predictor, PredictorError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScreeningError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("no seed systems")]
    NoSeeds,
    #[error("the {0} pool is empty")]
    EmptyPool(Role),
    #[error("no pool molecule reaches similarity {floor} to any seed; lower similarity_floor")]
    NoExpansions { floor: f64 },
    #[error("'{smiles}' does not parse: {message}")]
    InvalidMolecule { smiles: String, message: String },
    #[error(transparent)]
    Fingerprint(#[from] FingerprintError),
    #[error(transparent)]
    Predictor(#[from] PredictorError),
}

/// Per-solute hydration estimate over virtual systems: hydration ΔG is
/// taken per system from the two predictors, then averaged per solute.
pub fn hydration_benchmark_estimates(
    systems: &[SystemRecord],
    solvation: &dyn Predictor,
    transfer_il_water: &dyn Predictor,
) -> Result<BTreeMap<String, f64>, ScreeningError> {
    let s = solvation.predict_batch(systems)?;
    let t = transfer_il_water.predict_batch(systems)?;
    let mut by_solute: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for ((r, s), t) in systems.iter().zip(s).zip(t) {
        let solute = r.solute.clone().unwrap_or_default();
        by_solute.entry(solute).or_default().push((s, t));
    }
    Ok(by_solute
        .into_iter()
        .filter_map(|(k, v)| Some((k, averaged_hydration(&v)?)))
        .collect())
}
