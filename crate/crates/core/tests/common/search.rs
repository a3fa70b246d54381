//! Search scenarios with known answers.

use std::collections::HashMap;

use ionscreen::chem::canonicalize;
use ionscreen::corpus::random_molecules;
use ionscreen::datasets::{Category, Role, SystemRecord};
use ionscreen::fingerprints::{ecfp, tanimoto, DEFAULT_NBITS};
use ionscreen::predictor::{FnPredictor, PredictorError};
use ionscreen::screening::{
    beam_search, modify_anion, modify_side_chain, role_key, LookupPredictor, Objective, RolePool,
    SearchConfig, SearchResult,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fixture, mol};

pub fn il_system(cation: &str, anion: &str, solute: &str) -> SystemRecord {
    let mut r = SystemRecord::new(Category::IlSolute);
    r.cation = Some(canonicalize(cation).unwrap());
    r.anion = Some(canonicalize(anion).unwrap());
    r.solute = Some(canonicalize(solute).unwrap());
    r.temperature = Some(298.15);
    r
}

fn organic_system(solute: &str) -> SystemRecord {
    let mut r = SystemRecord::new(Category::OrganicSolute);
    r.solute = Some(solute.to_string());
    r.solvent = Some("O".into());
    r
}

/// Canonical, duplicate-free random molecules.
pub fn unique_molecules(n: usize, max_heavy: usize, seed: u64) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let out: Vec<String> = random_molecules(2 * n, max_heavy, seed)
        .into_iter()
        .map(|s| canonicalize(&s).unwrap())
        .filter(|c| seen.insert(c.clone()))
        .take(n)
        .collect();
    assert_eq!(out.len(), n, "not enough distinct molecules");
    out
}

/// Trajectory values never get worse.
pub fn trajectory_is_monotone(result: &SearchResult, objective: Objective) -> bool {
    result
        .trajectory
        .windows(2)
        .all(|w| !objective.better(w[0].value, w[1].value))
}

/// Values of the final beam are in best-first order.
pub fn ranked_is_sorted(result: &SearchResult, objective: Objective) -> bool {
    result
        .ranked
        .windows(2)
        .all(|w| !objective.better(w[1].value, w[0].value))
}

pub const ANION_VALUES: [(&str, f64); 5] = [
    ("SCN", -0.5964),
    ("DCA", -0.7336),
    ("TCM", -1.3686),
    ("TF2N", -1.6346),
    ("TCB", -1.7204),
];

pub const CATION_VALUES: [(&str, f64); 4] = [
    ("EMIM", -1.8748),
    ("EtOHMIM", -1.9520),
    ("EIM", -1.9692),
    ("EtOHIM", -2.1151),
];

/// Runs one modification loop against a lookup table and returns the
/// result with the fixture names of the ranked beam.
fn run_lookup(
    role: Role,
    table: &[(&str, f64)],
    fixed: (&str, &str),
    start: &str,
    config: &SearchConfig,
) -> Result<(SearchResult, Vec<String>), String> {
    let mut lookup = LookupPredictor::default();
    let mut pool = Vec::new();
    let mut names = HashMap::new();
    let build = |name: &str| match role {
        Role::Anion => il_system(&fixture(fixed.0), &fixture(name), &fixture(fixed.1)),
        _ => il_system(&fixture(name), &fixture(fixed.0), &fixture(fixed.1)),
    };
    for &(name, v) in table {
        let r = build(name);
        lookup.insert(&r, v);
        let smiles = r.role(role).unwrap().to_string();
        names.insert(smiles.clone(), name.to_string());
        pool.push(smiles);
    }
    let start = build(start);
    let result = match role {
        Role::Anion => modify_anion(&start, &pool, &lookup, config),
        _ => modify_side_chain(&start, &pool, &lookup, config),
    }
    .map_err(|e| e.to_string())?;
    let ranked = result
        .ranked
        .iter()
        .map(|c| names[c.record.role(role).unwrap()].clone())
        .collect();
    Ok((result, ranked))
}

/// Anion modification of EMIM SCN with CO2 as solute.
pub fn anion_reproduction(config: &SearchConfig) -> Result<(SearchResult, Vec<String>), String> {
    run_lookup(Role::Anion, &ANION_VALUES, ("EMIM", "CO2"), "SCN", config)
}

/// Side-chain modification of EMIM TF2N with NH3 as solute.
pub fn side_chain_reproduction(config: &SearchConfig) -> Result<(SearchResult, Vec<String>), String> {
    run_lookup(Role::Cation, &CATION_VALUES, ("TF2N", "NH3"), "EMIM", config)
}

/// Checks the selected system and the best-first order of the ranked beam
/// against the table, which must list values from worst to best.
pub fn check_reproduction(
    ranked: &[String],
    table: &[(&str, f64)],
    expected_best: &str,
) -> Result<(), String> {
    if ranked.first().map(String::as_str) != Some(expected_best) {
        return Err(format!("selected {ranked:?}, expected {expected_best} first"));
    }
    let want: Vec<&str> = table.iter().rev().map(|(n, _)| *n).filter(|n| ranked.iter().any(|r| r == n)).collect();
    if ranked.iter().map(String::as_str).collect::<Vec<_>>() != want {
        return Err(format!("ranked {ranked:?} does not follow {want:?}"));
    }
    Ok(())
}

pub struct PlantedOutcome {
    pub runs: usize,
    pub found: usize,
    pub max_iterations: usize,
    pub monotone: bool,
}

/// Hides a pool molecule as the target of a Tanimoto predictor and runs
/// the search from every pool molecule with similarity at least 0.3 to it
/// (up to `seeds_per_target` of them).
pub fn planted_target(pool_size: usize, targets: usize, seeds_per_target: usize, seed: u64) -> PlantedOutcome {
    let pool = unique_molecules(pool_size, 24, seed);
    let fps: Vec<_> = pool.iter().map(|s| ecfp(&mol(s), 2, DEFAULT_NBITS).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SearchConfig {
        objective: Objective::Maximize,
        beam_width: 8,
        iterations: 5,
        ..SearchConfig::default()
    };
    let mut out = PlantedOutcome {
        runs: 0,
        found: 0,
        max_iterations: 0,
        monotone: true,
    };
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(&mut rng);
    let mut used = 0;
    for &t in &order {
        if used == targets {
            break;
        }
        let sims: HashMap<&str, f64> =
            pool.iter().zip(&fps).map(|(s, f)| (s.as_str(), tanimoto(f, &fps[t]).unwrap())).collect();
        // The target must be the only pool molecule with its fingerprint.
        let twins = (0..pool.len()).filter(|&i| i != t && sims[pool[i].as_str()] == 1.0).count();
        let seeds: Vec<usize> = (0..pool.len()).filter(|&i| i != t && sims[pool[i].as_str()] >= 0.3).collect();
        if seeds.is_empty() || twins > 0 {
            continue;
        }
        used += 1;
        let predictor = FnPredictor(|r: &SystemRecord| -> Result<f64, PredictorError> {
            Ok(sims[r.solute.as_deref().unwrap()])
        });
        let pools = [RolePool {
            role: Role::Solute,
            molecules: pool.clone(),
        }];
        for &s in seeds.iter().take(seeds_per_target) {
            let result = beam_search(&[organic_system(&pool[s])], &pools, &predictor, &config).unwrap();
            out.runs += 1;
            out.max_iterations = out.max_iterations.max(result.iterations_run);
            out.monotone &= trajectory_is_monotone(&result, config.objective);
            if result.ranked[0].record.solute.as_deref() == Some(pool[t].as_str()) {
                out.found += 1;
            }
        }
    }
    out
}

/// Random pool and value table where the beam can hold every candidate and
/// the similarity gate is open, so the search must return the global
/// optimum. Two roles are searched at once when `two_roles` is set.
pub fn exhaustive_case(seed: u64, two_roles: bool) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let molecules = unique_molecules(if two_roles { 40 } else { 500 }, 16, seed);
    let (cations, anions): (Vec<String>, Vec<String>) = if two_roles {
        let n = rng.gen_range(2..=20);
        let m = rng.gen_range(2..=20);
        (molecules[..n].to_vec(), molecules[n..n + m].to_vec())
    } else {
        let n = rng.gen_range(2..=molecules.len());
        (molecules[..n].to_vec(), Vec::new())
    };
    let objective = if rng.gen_bool(0.5) { Objective::Minimize } else { Objective::Maximize };
    let start = SystemRecord {
        cation: Some(cations[0].clone()),
        anion: Some(anions.first().cloned().unwrap_or_else(|| "[Cl-]".into())),
        ..SystemRecord::new(Category::IlBulkNoT)
    };
    let mut space: Vec<SystemRecord> = Vec::new();
    let anion_choices: Vec<String> = if two_roles { anions.clone() } else { vec![start.anion.clone().unwrap()] };
    for c in &cations {
        for a in &anion_choices {
            let mut r = start.clone();
            r.cation = Some(c.clone());
            r.anion = Some(a.clone());
            space.push(r);
        }
    }
    let mut lookup = LookupPredictor::default();
    for r in &space {
        // Coarse values so that ties and the key tie-break are exercised.
        lookup.insert(r, f64::from(rng.gen_range(0..25)) / 4.0);
    }
    let mut pools = vec![RolePool {
        role: Role::Cation,
        molecules: cations.clone(),
    }];
    if two_roles {
        pools.push(RolePool {
            role: Role::Anion,
            molecules: anions.clone(),
        });
    }
    let config = SearchConfig {
        objective,
        beam_width: space.len() + rng.gen_range(0..3),
        iterations: if two_roles { 3 } else { 1 },
        similarity_floor: 0.0,
        ..SearchConfig::default()
    };
    let result = beam_search(&[start], &pools, &lookup, &config).map_err(|e| e.to_string())?;
    let best = space
        .iter()
        .map(|r| (lookup.values[&role_key(r)], role_key(r)))
        .min_by(|a, b| {
            let v = match objective {
                Objective::Minimize => a.0.total_cmp(&b.0),
                Objective::Maximize => b.0.total_cmp(&a.0),
            };
            v.then_with(|| a.1.cmp(&b.1))
        })
        .unwrap();
    let got = &result.ranked[0];
    if (got.value, &got.key) != (best.0, &best.1) {
        return Err(format!("seed {seed}: got {} = {}, brute force {} = {}", got.key, got.value, best.1, best.0));
    }
    if result.ranked.len() != space.len() {
        return Err(format!("seed {seed}: beam holds {} of {} systems", result.ranked.len(), space.len()));
    }
    if !trajectory_is_monotone(&result, objective) || !ranked_is_sorted(&result, objective) {
        return Err(format!("seed {seed}: ordering violated"));
    }
    Ok(())
}
