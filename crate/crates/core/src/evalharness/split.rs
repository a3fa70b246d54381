//! Group k-fold splits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::datasets::{Role, SystemRecord};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitScheme {
    Cation,
    IlPair,
    Ternary,
    Solvent,
    SoluteSolvent,
}

impl SplitScheme {
    pub const ALL: [SplitScheme; 5] = [
        SplitScheme::Cation,
        SplitScheme::IlPair,
        SplitScheme::Ternary,
        SplitScheme::Solvent,
        SplitScheme::SoluteSolvent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SplitScheme::Cation => "cation",
            SplitScheme::IlPair => "il_pair",
            SplitScheme::Ternary => "ternary",
            SplitScheme::Solvent => "solvent",
            SplitScheme::SoluteSolvent => "solute_solvent",
        }
    }

    pub fn roles(self) -> &'static [Role] {
        match self {
            SplitScheme::Cation => &[Role::Cation],
            SplitScheme::IlPair => &[Role::Cation, Role::Anion],
            SplitScheme::Ternary => &[Role::Cation, Role::Anion, Role::Solute],
            SplitScheme::Solvent => &[Role::Solvent],
            SplitScheme::SoluteSolvent => &[Role::Solute, Role::Solvent],
        }
    }

    /// Group key: the scheme's role SMILES joined by `|`.
    pub fn group_key(self, record: &SystemRecord) -> Option<String> {
        let parts: Option<Vec<&str>> = self.roles().iter().map(|&r| record.role(r)).collect();
        Some(parts?.join("|"))
    }
}

impl fmt::Display for SplitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplitScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SplitScheme::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown split scheme '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub scheme: SplitScheme,
    pub k: usize,
    pub seed: u64,
    pub assignment: BTreeMap<String, usize>,
}

impl SplitPlan {
    pub fn fold_of(&self, record: &SystemRecord) -> Option<usize> {
        self.assignment.get(&self.scheme.group_key(record)?).copied()
    }

    /// Record indices per fold.
    pub fn fold_indices(&self, records: &[SystemRecord]) -> Result<Vec<Vec<usize>>, EvalError> {
        let mut folds = vec![Vec::new(); self.k];
        for (i, r) in records.iter().enumerate() {
            let f = self.fold_of(r).ok_or(EvalError::UncoveredRecord { index: i })?;
            folds[f].push(i);
        }
        Ok(folds)
    }

    /// Number of groups dealt to each fold.
    pub fn group_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for &f in self.assignment.values() {
            counts[f] += 1;
        }
        counts
    }
}

/// Shuffles the distinct group keys with `seed` and deals them round-robin
/// into `k` folds.
pub fn make_split(
    records: &[SystemRecord],
    scheme: SplitScheme,
    k: usize,
    seed: u64,
) -> Result<SplitPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidK(k));
    }
    if records.is_empty() {
        return Err(EvalError::TooFewPoints {
            found: 0,
            required: 1,
        });
    }
    let mut groups = BTreeSet::new();
    for (i, r) in records.iter().enumerate() {
        let key = scheme.group_key(r).ok_or(EvalError::MissingGroupKey {
            index: i,
            scheme: scheme.name(),
        })?;
        groups.insert(key);
    }
    if groups.len() < k {
        return Err(EvalError::NotEnoughGroups {
            groups: groups.len(),
            k,
        });
    }
    let mut groups: Vec<String> = groups.into_iter().collect();
    groups.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let assignment = groups
        .into_iter()
        .enumerate()
        .map(|(i, g)| (g, i % k))
        .collect();
    Ok(SplitPlan {
        scheme,
        k,
        seed,
        assignment,
    })
}
