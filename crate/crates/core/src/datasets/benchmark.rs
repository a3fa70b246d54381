//! Virtual ionic-liquid systems for the hydration benchmark: each solute is
//! paired with novel cation/anion combinations that never occur together
//! in the source records.

use std::collections::{BTreeSet, HashSet};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Category, DatasetError, SystemRecord, SYNTHETIC_TEMPERATURE_K};

pub const BENCHMARK_SYSTEMS_PER_SOLUTE: usize = 10;

/// Builds `BENCHMARK_SYSTEMS_PER_SOLUTE` virtual `il_solute` systems at
/// 298.15 K for every distinct solute of the `il_solute` records.
///
/// Ions come from every record that names them; a pair is "known" when any
/// record carries it. Solutes are processed in sorted order from a single
/// seeded stream.
pub fn build_hydration_benchmark(
    records: &[SystemRecord],
    seed: u64,
) -> Result<Vec<SystemRecord>, DatasetError> {
    let cations: BTreeSet<&str> = records.iter().filter_map(|r| r.cation.as_deref()).collect();
    let anions: BTreeSet<&str> = records.iter().filter_map(|r| r.anion.as_deref()).collect();
    if cations.len() < 2 || anions.len() < 2 {
        return Err(DatasetError::Invalid(format!(
            "need at least 2 distinct cations and 2 distinct anions, found {} and {}",
            cations.len(),
            anions.len()
        )));
    }
    let known: HashSet<(&str, &str)> = records
        .iter()
        .filter_map(|r| Some((r.cation.as_deref()?, r.anion.as_deref()?)))
        .collect();
    let novel: Vec<(&str, &str)> = cations
        .iter()
        .flat_map(|&c| anions.iter().map(move |&a| (c, a)))
        .filter(|p| !known.contains(p))
        .collect();
    let solutes: BTreeSet<&str> = records
        .iter()
        .filter(|r| r.category == Category::IlSolute)
        .filter_map(|r| r.solute.as_deref())
        .collect();
    if let Some(first) = solutes.first() {
        if novel.len() < BENCHMARK_SYSTEMS_PER_SOLUTE {
            return Err(DatasetError::NotEnoughNovelPairs {
                solute: first.to_string(),
                available: novel.len(),
                required: BENCHMARK_SYSTEMS_PER_SOLUTE,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(solutes.len() * BENCHMARK_SYSTEMS_PER_SOLUTE);
    for solute in solutes {
        for (k, i) in index::sample(&mut rng, novel.len(), BENCHMARK_SYSTEMS_PER_SOLUTE)
            .into_iter()
            .enumerate()
        {
            let (c, a) = novel[i];
            let mut r = SystemRecord::new(Category::IlSolute);
            r.cation = Some(c.to_string());
            r.anion = Some(a.to_string());
            r.solute = Some(solute.to_string());
            r.temperature = Some(SYNTHETIC_TEMPERATURE_K);
            r.source_id = format!("virtual:{k}");
            out.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(c: &str, a: &str, s: &str) -> SystemRecord {
        let mut r = SystemRecord::new(Category::IlSolute);
        r.cation = Some(c.into());
        r.anion = Some(a.into());
        r.solute = Some(s.into());
        r.temperature = Some(298.15);
        r
    }

    #[test]
    fn too_few_novel_pairs_names_solute() {
        let recs = vec![rec("C1", "A1", "S"), rec("C2", "A2", "S")];
        match build_hydration_benchmark(&recs, 0) {
            Err(DatasetError::NotEnoughNovelPairs { solute, available, .. }) => {
                assert_eq!(solute, "S");
                assert_eq!(available, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ten_novel_systems_per_solute() {
        let mut recs = Vec::new();
        for k in 0..5 {
            recs.push(rec(&format!("C{k}"), &format!("A{k}"), if k % 2 == 0 { "S1" } else { "S2" }));
        }
        let out = build_hydration_benchmark(&recs, 9).unwrap();
        assert_eq!(out.len(), 20);
        let known: HashSet<_> = recs.iter().map(|r| (r.cation.clone(), r.anion.clone())).collect();
        for s in ["S1", "S2"] {
            let pairs: HashSet<_> = out
                .iter()
                .filter(|r| r.solute.as_deref() == Some(s))
                .map(|r| (r.cation.clone(), r.anion.clone()))
                .collect();
            assert_eq!(pairs.len(), 10);
            assert!(pairs.is_disjoint(&known));
        }
        assert_eq!(out, build_hydration_benchmark(&recs, 9).unwrap());
    }

    #[test]
    fn single_cation_is_rejected() {
        let recs = vec![rec("C1", "A1", "S"), rec("C1", "A2", "S")];
        assert!(matches!(build_hydration_benchmark(&recs, 0), Err(DatasetError::Invalid(_))));
    }
}
