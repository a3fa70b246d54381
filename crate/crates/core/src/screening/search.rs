//! Top-K seeding and similarity-gated beam search over role substitutions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chem::parse_smiles;
use crate::datasets::{Property, Role, SystemRecord};
use crate::fingerprints::{fingerprint, tanimoto, Fingerprint, FingerprintKind, DEFAULT_NBITS};
use crate::predictor::{Predictor, PredictorError};

use super::ScreeningError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    Minimize,
    Maximize,
}

impl Objective {
    /// Orders `(value, key)` pairs best first.
    fn compare(self, a: (f64, &str), b: (f64, &str)) -> std::cmp::Ordering {
        let by_value = match self {
            Objective::Minimize => a.0.total_cmp(&b.0),
            Objective::Maximize => b.0.total_cmp(&a.0),
        };
        by_value.then_with(|| a.1.cmp(b.1))
    }

    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Minimize => a < b,
            Objective::Maximize => a > b,
        }
    }
}

impl FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimize" | "min" => Ok(Objective::Minimize),
            "maximize" | "max" => Ok(Objective::Maximize),
            _ => Err(format!("unknown objective '{s}'")),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Minimize => "minimize",
            Objective::Maximize => "maximize",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub objective: Objective,
    pub property: Option<Property>,
    pub beam_width: usize,
    pub iterations: usize,
    pub top_k: usize,
    pub similarity_floor: f64,
    pub fingerprint: FingerprintKind,
    pub nbits: usize,
    pub seed: u64,
}

/// Iteration budget of the modification loops.
pub const DEFAULT_BUDGET: usize = 5;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            objective: Objective::Minimize,
            property: None,
            beam_width: 8,
            iterations: DEFAULT_BUDGET,
            top_k: 5,
            similarity_floor: 0.3,
            fingerprint: FingerprintKind::default(),
            nbits: DEFAULT_NBITS,
            seed: 42,
        }
    }
}

impl SearchConfig {
    /// Defaults for the modification loops. Their pool is already the
    /// chosen family of replacements, so the similarity gate is open.
    pub fn modification() -> Self {
        SearchConfig {
            similarity_floor: 0.0,
            ..SearchConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ScreeningError> {
        let bad = |m: &str| Err(ScreeningError::InvalidConfig(m.to_string()));
        if self.beam_width == 0 {
            return bad("beam_width must be at least 1");
        }
        if self.top_k == 0 {
            return bad("top_k must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.similarity_floor) {
            return bad("similarity_floor must lie in [0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Seed,
    Expanded {
        parent: String,
        role: Role,
        similarity: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub key: String,
    pub record: SystemRecord,
    pub value: f64,
    pub property: Option<Property>,
    pub provenance: Provenance,
    pub iteration: usize,
}

/// Role SMILES joined by `|` in fixed role order, absent roles empty.
pub fn role_key(record: &SystemRecord) -> String {
    record.roles().map(|r| r.unwrap_or("")).join("|")
}

/// Unlabeled copy of the record for prediction.
fn query_record(record: &SystemRecord) -> SystemRecord {
    let mut r = record.clone();
    r.property = None;
    r.value = None;
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopK {
    pub candidates: Vec<Candidate>,
    /// Set when fewer than `top_k` distinct tuples were available.
    pub truncated: bool,
}

/// Scores every distinct role tuple in `records` and keeps the best
/// `config.top_k`; ties go to the lexicographically smaller key.
pub fn top_k_seeds(
    records: &[SystemRecord],
    predictor: &dyn Predictor,
    config: &SearchConfig,
) -> Result<TopK, ScreeningError> {
    config.validate()?;
    if records.is_empty() {
        return Err(ScreeningError::NoSeeds);
    }
    let mut distinct: BTreeMap<String, SystemRecord> = BTreeMap::new();
    for r in records {
        distinct.entry(role_key(r)).or_insert_with(|| query_record(r));
    }
    let queries: Vec<SystemRecord> = distinct.values().cloned().collect();
    let values = predictor.predict_batch(&queries)?;
    let mut candidates: Vec<Candidate> = distinct
        .into_iter()
        .zip(values)
        .map(|((key, record), value)| Candidate {
            key,
            record,
            value,
            property: config.property,
            provenance: Provenance::Seed,
            iteration: 0,
        })
        .collect();
    candidates.sort_by(|a, b| config.objective.compare((a.value, &a.key), (b.value, &b.key)));
    let truncated = candidates.len() < config.top_k;
    if truncated {
        log::warn!(
            "top_k = {} but only {} distinct systems; returning all",
            config.top_k,
            candidates.len()
        );
    }
    candidates.truncate(config.top_k);
    Ok(TopK {
        candidates,
        truncated,
    })
}

/// Candidate molecules that may replace one role.
#[derive(Debug, Clone, PartialEq)]
pub struct RolePool {
    pub role: Role,
    pub molecules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Final beam, best first.
    pub ranked: Vec<Candidate>,
    /// Best candidate seen so far after each iteration; entry 0 is the best seed.
    pub trajectory: Vec<Candidate>,
    pub iterations_run: usize,
    /// Distinct systems sent to the predictor.
    pub evaluations: usize,
}

struct Scorer<'a> {
    predictor: &'a dyn Predictor,
    cache: HashMap<String, f64>,
}

impl Scorer<'_> {
    /// Fills `value` for every candidate, predicting unseen keys in one
    /// batch in key order.
    fn score(&mut self, candidates: &mut [Candidate]) -> Result<(), PredictorError> {
        let mut missing: BTreeMap<&str, SystemRecord> = BTreeMap::new();
        for c in candidates.iter() {
            if !self.cache.contains_key(&c.key) {
                missing.entry(&c.key).or_insert_with(|| query_record(&c.record));
            }
        }
        if !missing.is_empty() {
            let keys: Vec<String> = missing.keys().map(|k| k.to_string()).collect();
            let queries: Vec<SystemRecord> = missing.into_values().collect();
            let values = self.predictor.predict_batch(&queries)?;
            for (k, v) in keys.into_iter().zip(values) {
                self.cache.insert(k, v);
            }
        }
        for c in candidates.iter_mut() {
            c.value = self.cache[&c.key];
        }
        Ok(())
    }
}

struct FingerprintCache {
    kind: FingerprintKind,
    nbits: usize,
    cache: HashMap<String, Fingerprint>,
}

impl FingerprintCache {
    fn get(&mut self, smiles: &str) -> Result<&Fingerprint, ScreeningError> {
        if !self.cache.contains_key(smiles) {
            let mol = parse_smiles(smiles).map_err(|e| ScreeningError::InvalidMolecule {
                smiles: smiles.to_string(),
                message: e.to_string(),
            })?;
            let fp = fingerprint(&mol, self.kind, self.nbits)?;
            self.cache.insert(smiles.to_string(), fp);
        }
        Ok(&self.cache[smiles])
    }
}

/// Beam search over role substitutions.
///
/// Each iteration expands every beam member by swapping one mutable role
/// for each pool molecule whose Tanimoto similarity to the member's current
/// molecule is at least `similarity_floor`. The new beam is the best
/// `beam_width` of the old beam and all expansions, ordered by predicted
/// value and then key. The search stops after `iterations` rounds or when
/// the beam no longer changes.
pub fn beam_search(
    seeds: &[SystemRecord],
    pools: &[RolePool],
    predictor: &dyn Predictor,
    config: &SearchConfig,
) -> Result<SearchResult, ScreeningError> {
    config.validate()?;
    if seeds.is_empty() {
        return Err(ScreeningError::NoSeeds);
    }
    let mut fps = FingerprintCache {
        kind: config.fingerprint,
        nbits: config.nbits,
        cache: HashMap::new(),
    };
    let mut scorer = Scorer {
        predictor,
        cache: HashMap::new(),
    };
    let order = |a: &Candidate, b: &Candidate| config.objective.compare((a.value, &a.key), (b.value, &b.key));

    let mut beam: Vec<Candidate> = Vec::new();
    let mut seen = HashSet::new();
    for s in seeds {
        let key = role_key(s);
        if seen.insert(key.clone()) {
            beam.push(Candidate {
                key,
                record: query_record(s),
                value: 0.0,
                property: config.property,
                provenance: Provenance::Seed,
                iteration: 0,
            });
        }
    }
    scorer.score(&mut beam)?;
    beam.sort_by(order);
    let mut best = beam[0].clone();
    let mut trajectory = vec![best.clone()];
    let mut iterations_run = 0;

    let pool_fps: Vec<Vec<Fingerprint>> = pools
        .iter()
        .map(|p| p.molecules.iter().map(|m| fps.get(m).cloned()).collect())
        .collect::<Result<_, _>>()?;

    for iteration in 1..=config.iterations {
        let mut fresh = Vec::new();
        let mut any_expansion = false;
        let mut known: HashSet<String> = beam.iter().map(|c| c.key.clone()).collect();
        for member in &beam {
            for (pool, pool_fp) in pools.iter().zip(&pool_fps) {
                let Some(current) = member.record.role(pool.role) else {
                    continue;
                };
                let current_fp = fps.get(current)?.clone();
                for (m, fp) in pool.molecules.iter().zip(pool_fp) {
                    let sim = tanimoto(&current_fp, fp)?;
                    if sim < config.similarity_floor {
                        continue;
                    }
                    any_expansion = true;
                    let mut record = member.record.clone();
                    record.set_role(pool.role, Some(m.clone()));
                    let key = role_key(&record);
                    // The first parent in beam order claims a key.
                    if !known.insert(key.clone()) {
                        continue;
                    }
                    fresh.push(Candidate {
                        key,
                        record,
                        value: 0.0,
                        property: config.property,
                        provenance: Provenance::Expanded {
                            parent: member.key.clone(),
                            role: pool.role,
                            similarity: sim,
                        },
                        iteration,
                    });
                }
            }
        }
        if iteration == 1 && !any_expansion {
            return Err(ScreeningError::NoExpansions {
                floor: config.similarity_floor,
            });
        }
        scorer.score(&mut fresh)?;
        let before: Vec<String> = beam.iter().map(|c| c.key.clone()).collect();
        beam.extend(fresh);
        beam.sort_by(order);
        beam.truncate(config.beam_width);
        iterations_run = iteration;
        if config.objective.better(beam[0].value, best.value)
            || (beam[0].value == best.value && beam[0].key < best.key)
        {
            best = beam[0].clone();
        }
        trajectory.push(best.clone());
        let after: Vec<String> = beam.iter().map(|c| c.key.clone()).collect();
        if before == after {
            break;
        }
    }
    Ok(SearchResult {
        ranked: beam,
        trajectory,
        iterations_run,
        evaluations: scorer.cache.len(),
    })
}

/// Fixes everything but the anion of `start` and searches `anion_pool`.
pub fn modify_anion(
    start: &SystemRecord,
    anion_pool: &[String],
    predictor: &dyn Predictor,
    config: &SearchConfig,
) -> Result<SearchResult, ScreeningError> {
    modify_role(start, Role::Anion, anion_pool, predictor, config)
}

/// Fixes everything but the cation of `start` and searches `cation_pool`.
pub fn modify_side_chain(
    start: &SystemRecord,
    cation_pool: &[String],
    predictor: &dyn Predictor,
    config: &SearchConfig,
) -> Result<SearchResult, ScreeningError> {
    modify_role(start, Role::Cation, cation_pool, predictor, config)
}

fn modify_role(
    start: &SystemRecord,
    role: Role,
    pool: &[String],
    predictor: &dyn Predictor,
    config: &SearchConfig,
) -> Result<SearchResult, ScreeningError> {
    if pool.is_empty() {
        return Err(ScreeningError::EmptyPool(role));
    }
    if start.role(role).is_none() {
        return Err(ScreeningError::InvalidConfig(format!("starting system has no {role}")));
    }
    beam_search(
        std::slice::from_ref(start),
        &[RolePool {
            role,
            molecules: pool.to_vec(),
        }],
        predictor,
        config,
    )
}

/// Predictor backed by a table of values keyed by [`role_key`].
#[derive(Debug, Clone, Default)]
pub struct LookupPredictor {
    pub values: HashMap<String, f64>,
}

impl LookupPredictor {
    pub fn insert(&mut self, record: &SystemRecord, value: f64) {
        self.values.insert(role_key(record), value);
    }
}

impl Predictor for LookupPredictor {
    fn predict_batch(&self, records: &[SystemRecord]) -> Result<Vec<f64>, PredictorError> {
        records
            .iter()
            .map(|r| {
                let key = role_key(r);
                self.values
                    .get(&key)
                    .copied()
                    .ok_or_else(|| PredictorError::InvalidData(format!("no value for system {key}")))
            })
            .collect()
    }
}
