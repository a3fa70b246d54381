//! Folded ECFP and atom-pair fingerprints, Tanimoto similarity and
//! similarity-matrix clustering.

mod atom_pair;
mod cluster;
mod ecfp;
pub mod hash;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chem::Molecule;

pub use atom_pair::{atom_pair_identifiers, atom_type, MAX_DISTANCE};
pub use cluster::{hierarchical_cluster, Dendrogram, Merge};
pub use ecfp::{atom_invariant, ecfp_identifiers};

pub const DEFAULT_NBITS: usize = 2048;
pub const DEFAULT_RADIUS: u32 = 2;
pub const MAX_RADIUS: u32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FingerprintError {
    #[error("fingerprints are not comparable: {0} vs {1}")]
    Mismatch(String, String),
    #[error("invalid fingerprint parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid similarity matrix: {0}")]
    InvalidMatrix(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FingerprintKind {
    Ecfp { radius: u32 },
    AtomPair,
}

impl Default for FingerprintKind {
    fn default() -> Self {
        FingerprintKind::Ecfp {
            radius: DEFAULT_RADIUS,
        }
    }
}

impl fmt::Display for FingerprintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FingerprintKind::Ecfp { radius } => write!(f, "ecfp{}", 2 * radius),
            FingerprintKind::AtomPair => f.write_str("atom_pair"),
        }
    }
}

impl std::str::FromStr for FingerprintKind {
    type Err = String;

    /// `ecfp4` (diameter 4 = radius 2), `ecfp0`..`ecfp8`, `atom_pair`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "atom_pair" || s == "atompair" {
            return Ok(FingerprintKind::AtomPair);
        }
        if s == "ecfp" {
            return Ok(FingerprintKind::default());
        }
        let diameter: u32 = s
            .strip_prefix("ecfp")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| format!("unknown fingerprint kind '{s}'"))?;
        if diameter % 2 != 0 || diameter / 2 > MAX_RADIUS {
            return Err(format!("unsupported ECFP diameter {diameter}"));
        }
        Ok(FingerprintKind::Ecfp {
            radius: diameter / 2,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    kind: FingerprintKind,
    nbits: usize,
    words: Vec<u64>,
    popcount: u32,
}

impl Fingerprint {
    fn from_identifiers(
        kind: FingerprintKind,
        nbits: usize,
        ids: &BTreeSet<u64>,
    ) -> Result<Fingerprint, FingerprintError> {
        check_nbits(nbits)?;
        let mut words = vec![0u64; nbits.div_ceil(64)];
        for &id in ids {
            let bit = (id % nbits as u64) as usize;
            words[bit / 64] |= 1 << (bit % 64);
        }
        let popcount = words.iter().map(|w| w.count_ones()).sum();
        Ok(Fingerprint {
            kind,
            nbits,
            words,
            popcount,
        })
    }

    pub fn kind(&self) -> FingerprintKind {
        self.kind
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn popcount(&self) -> u32 {
        self.popcount
    }

    pub fn is_empty(&self) -> bool {
        self.popcount == 0
    }

    pub fn contains(&self, bit: usize) -> bool {
        bit < self.nbits && self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    /// Indices of set bits, ascending.
    pub fn on_bits(&self) -> Vec<usize> {
        (0..self.nbits).filter(|&b| self.contains(b)).collect()
    }

    /// Lowercase hex, bit 0 in the low nibble of the last character.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.nbits / 4);
        for w in self.words.iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        let keep = self.nbits.div_ceil(4);
        s[s.len() - keep..].to_string()
    }

    fn check_comparable(&self, other: &Fingerprint) -> Result<(), FingerprintError> {
        if self.kind != other.kind || self.nbits != other.nbits {
            return Err(FingerprintError::Mismatch(
                format!("{}/{}", self.kind, self.nbits),
                format!("{}/{}", other.kind, other.nbits),
            ));
        }
        Ok(())
    }
}

fn check_nbits(nbits: usize) -> Result<(), FingerprintError> {
    if nbits == 0 || !nbits.is_power_of_two() {
        return Err(FingerprintError::InvalidParameters(format!(
            "nbits must be a power of two, got {nbits}"
        )));
    }
    Ok(())
}

pub fn ecfp(mol: &Molecule, radius: u32, nbits: usize) -> Result<Fingerprint, FingerprintError> {
    if radius > MAX_RADIUS {
        return Err(FingerprintError::InvalidParameters(format!(
            "radius must be at most {MAX_RADIUS}, got {radius}"
        )));
    }
    Fingerprint::from_identifiers(
        FingerprintKind::Ecfp { radius },
        nbits,
        &ecfp_identifiers(mol, radius),
    )
}

pub fn atom_pair(mol: &Molecule, nbits: usize) -> Result<Fingerprint, FingerprintError> {
    Fingerprint::from_identifiers(FingerprintKind::AtomPair, nbits, &atom_pair_identifiers(mol))
}

pub fn fingerprint(
    mol: &Molecule,
    kind: FingerprintKind,
    nbits: usize,
) -> Result<Fingerprint, FingerprintError> {
    match kind {
        FingerprintKind::Ecfp { radius } => ecfp(mol, radius, nbits),
        FingerprintKind::AtomPair => atom_pair(mol, nbits),
    }
}

/// `|a ∧ b| / |a ∨ b|`, and 1.0 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    a.check_comparable(b)?;
    Ok(tanimoto_unchecked(a, b))
}

fn tanimoto_unchecked(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let common: u32 = a
        .words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x & y).count_ones())
        .sum();
    let union = a.popcount + b.popcount - common;
    if union == 0 {
        1.0
    } else {
        f64::from(common) / f64::from(union)
    }
}

/// Tanimoto of two identifier sets; 1.0 when both are empty.
pub fn set_tanimoto(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> f64 {
    let common = a.intersection(b).count();
    let union = a.len() + b.len() - common;
    if union == 0 {
        1.0
    } else {
        common as f64 / union as f64
    }
}

/// Pairwise Tanimoto matrix; rows are computed in parallel.
pub fn similarity_matrix(fps: &[Fingerprint]) -> Result<Vec<Vec<f64>>, FingerprintError> {
    if let Some(first) = fps.first() {
        for fp in fps {
            first.check_comparable(fp)?;
        }
    }
    Ok(fps
        .par_iter()
        .map(|a| fps.iter().map(|b| tanimoto_unchecked(a, b)).collect())
        .collect())
}

/// Fingerprints every molecule with each kind and averages the per-kind
/// similarity matrices elementwise.
pub fn combined_similarity_matrix(
    mols: &[Molecule],
    kinds: &[FingerprintKind],
    nbits: usize,
) -> Result<Vec<Vec<f64>>, FingerprintError> {
    if kinds.is_empty() {
        return Err(FingerprintError::InvalidParameters(
            "at least one fingerprint kind is required".into(),
        ));
    }
    let n = mols.len();
    let mut total = vec![vec![0.0; n]; n];
    for &kind in kinds {
        let fps = mols
            .par_iter()
            .map(|m| fingerprint(m, kind, nbits))
            .collect::<Result<Vec<_>, _>>()?;
        let m = similarity_matrix(&fps)?;
        for (t_row, m_row) in total.iter_mut().zip(m) {
            for (t, v) in t_row.iter_mut().zip(m_row) {
                *t += v;
            }
        }
    }
    let k = kinds.len() as f64;
    for row in &mut total {
        for v in row.iter_mut() {
            *v /= k;
        }
    }
    Ok(total)
}
