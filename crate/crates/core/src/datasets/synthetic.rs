//! Random unlabeled systems for alignment pre-training.

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chem::canonicalize;

use super::{Category, DatasetError, SystemRecord};

/// Temperature assigned to every synthetic system that carries one.
pub const SYNTHETIC_TEMPERATURE_K: f64 = 298.15;

/// Molecule pools, canonicalized and deduplicated (first occurrence wins).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pools {
    pub cations: Vec<String>,
    pub anions: Vec<String>,
    pub solutes: Vec<String>,
    pub solvents: Vec<String>,
}

fn canonical_pool(name: &str, items: &[String]) -> Result<Vec<String>, DatasetError> {
    let mut out: Vec<String> = Vec::with_capacity(items.len());
    for s in items {
        let c = canonicalize(s)
            .map_err(|e| DatasetError::Invalid(format!("{name} pool entry '{s}': {e}")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

impl Pools {
    pub fn new(
        cations: &[String],
        anions: &[String],
        solutes: &[String],
        solvents: &[String],
    ) -> Result<Pools, DatasetError> {
        Ok(Pools {
            cations: canonical_pool("cation", cations)?,
            anions: canonical_pool("anion", anions)?,
            solutes: canonical_pool("solute", solutes)?,
            solvents: canonical_pool("solvent", solvents)?,
        })
    }

    /// Number of distinct systems of one category.
    pub fn capacity(&self, category: Category) -> usize {
        let (c, a, su, so) = (
            self.cations.len(),
            self.anions.len(),
            self.solutes.len(),
            self.solvents.len(),
        );
        match category {
            Category::IlSolute => c.saturating_mul(a).saturating_mul(su),
            Category::OrganicSolute => su.saturating_mul(so),
            Category::IlBulkWithT | Category::IlBulkNoT => c.saturating_mul(a),
        }
    }

    fn decode(&self, category: Category, mut idx: usize) -> SystemRecord {
        let mut r = SystemRecord::new(category);
        let mut take = |pool: &[String]| {
            let item = pool[idx % pool.len()].clone();
            idx /= pool.len();
            Some(item)
        };
        match category {
            Category::IlSolute => {
                r.cation = take(&self.cations);
                r.anion = take(&self.anions);
                r.solute = take(&self.solutes);
            }
            Category::OrganicSolute => {
                r.solute = take(&self.solutes);
                r.solvent = take(&self.solvents);
            }
            Category::IlBulkWithT | Category::IlBulkNoT => {
                r.cation = take(&self.cations);
                r.anion = take(&self.anions);
            }
        }
        if category.has_temperature() {
            r.temperature = Some(SYNTHETIC_TEMPERATURE_K);
        }
        r.source_id = "synthetic".into();
        r
    }
}

/// Samples `n` distinct unlabeled systems.
///
/// Each system first draws a category uniformly from `categories` (all four
/// when empty), skipping categories whose combinations are used up, then a
/// combination of that category uniformly without replacement.
pub fn generate_synthetic_systems(
    pools: &Pools,
    n: usize,
    seed: u64,
    categories: &[Category],
) -> Result<Vec<SystemRecord>, DatasetError> {
    let mut cats: Vec<Category> = if categories.is_empty() {
        Category::ALL.to_vec()
    } else {
        categories.to_vec()
    };
    cats.sort();
    cats.dedup();
    let capacity: Vec<usize> = cats.iter().map(|&c| pools.capacity(c)).collect();
    let available = capacity.iter().fold(0usize, |acc, &c| acc.saturating_add(c));
    if n > available {
        return Err(DatasetError::NotEnoughCombinations {
            requested: n,
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; cats.len()];
    let mut sequence = Vec::with_capacity(n);
    for _ in 0..n {
        let open: Vec<usize> = (0..cats.len()).filter(|&k| counts[k] < capacity[k]).collect();
        let k = open[rng.gen_range(0..open.len())];
        counts[k] += 1;
        sequence.push(k);
    }
    let mut picks: Vec<std::vec::IntoIter<usize>> = cats
        .iter()
        .enumerate()
        .map(|(k, _)| index::sample(&mut rng, capacity[k], counts[k]).into_vec().into_iter())
        .collect();
    Ok(sequence
        .into_iter()
        .map(|k| {
            let idx = picks[k].next().expect("one index per draw");
            pools.decode(cats[k], idx)
        })
        .collect())
}
