//! Reference implementations shared by the integration tests. Each one is
//! written for clarity over speed and shares no code with the library
//! beyond the parsed `Molecule`.
#![allow(dead_code)]

pub mod descriptors;
pub mod graph;
pub mod search;
pub mod smarts;
pub mod stats;

use std::collections::HashSet;

use ionscreen::chem::{parse_smiles, Molecule};
use ionscreen::corpus::IonLibrary;
use ionscreen::datasets::{generate_synthetic_systems, Category, SystemRecord};
use ionscreen::evalharness::{make_split, SplitScheme};

pub const IONS_SMI: &str = include_str!("../../data/ions.smi");

/// `(smiles, name)` pairs of the fixture ion list.
pub fn fixture_ions() -> Vec<(String, String)> {
    IONS_SMI
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().to_string(), it.next().unwrap_or("").to_string())
        })
        .collect()
}

pub fn fixture(name: &str) -> String {
    fixture_ions()
        .into_iter()
        .find(|(_, n)| n == name)
        .unwrap_or_else(|| panic!("no fixture named {name}"))
        .0
}

pub fn mol(smiles: &str) -> Molecule {
    parse_smiles(smiles).unwrap_or_else(|e| panic!("{smiles}: {e}"))
}

/// Molecules spanning the fixture ions plus small neutral cases with known
/// hand values.
pub const DESCRIPTOR_PANEL: [&str; 20] = [
    "CCn1cc[n+](C)c1",
    "CCCCn1cc[n+](C)c1",
    "CCCC[P+](CC)(CCCC)CCCC",
    "CCCCCCCC[n+]1cccc2ccccc21",
    "OCCn1cc[nH+]c1",
    "FC(F)(F)S(=O)(=O)[N-]S(=O)(=O)C(F)(F)F",
    "FC(F)(F)C(F)(F)S(=O)(=O)[N-]S(=O)(=O)C(F)(F)C(F)(F)F",
    "[S-]C#N",
    "N#C[N-]C#N",
    "N#C[C-](C#N)C#N",
    "N#C[B-](C#N)(C#N)C#N",
    "CCOP(=O)([O-])OCC",
    "C[C@H](O)C(=O)[O-]",
    "O=C=O",
    "N",
    "CCCCO",
    "O",
    "CC(=O)Nc1ccc(O)cc1",
    "C1CCC2(C1)CCNC2",
    "CC1=CC(=O)c2ccccc2C1=O",
];

/// `n` synthetic systems whose roles cover the split scheme.
pub fn split_dataset(scheme: SplitScheme, n: usize, seed: u64) -> Vec<SystemRecord> {
    let category = match scheme {
        SplitScheme::Cation | SplitScheme::IlPair | SplitScheme::Ternary => Category::IlSolute,
        SplitScheme::Solvent | SplitScheme::SoluteSolvent => Category::OrganicSolute,
    };
    generate_synthetic_systems(&IonLibrary::build().pools(), n, seed, &[category]).unwrap()
}

/// Checks a group k-fold plan from first principles: every record lands in
/// exactly one fold, no group straddles train and test, fold group counts
/// differ by at most one, and the same seed gives the same plan.
pub fn check_split(records: &[SystemRecord], scheme: SplitScheme, k: usize, seed: u64) -> Result<(), String> {
    let plan = make_split(records, scheme, k, seed).map_err(|e| e.to_string())?;
    let folds = plan.fold_indices(records).map_err(|e| e.to_string())?;
    let mut seen = vec![0; records.len()];
    for f in &folds {
        for &i in f {
            seen[i] += 1;
        }
    }
    if seen.iter().any(|&c| c != 1) {
        return Err("records not partitioned".into());
    }
    let key = |r: &SystemRecord| {
        scheme
            .roles()
            .iter()
            .map(|&role| r.role(role).unwrap().to_string())
            .collect::<Vec<_>>()
    };
    let mut groups = Vec::new();
    for (f, test) in folds.iter().enumerate() {
        let test_keys: HashSet<Vec<String>> = test.iter().map(|&i| key(&records[i])).collect();
        let train_keys: HashSet<Vec<String>> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, idx)| idx.iter().map(|&i| key(&records[i])))
            .collect();
        if let Some(k) = test_keys.intersection(&train_keys).next() {
            return Err(format!("fold {f}: group {k:?} in train and test"));
        }
        groups.push(test_keys.len());
    }
    let (lo, hi) = (groups.iter().min().unwrap(), groups.iter().max().unwrap());
    if hi - lo > 1 {
        return Err(format!("fold group counts {groups:?}"));
    }
    if groups != plan.group_counts() {
        return Err("group_counts disagrees with the folds".into());
    }
    let again = make_split(records, scheme, k, seed).map_err(|e| e.to_string())?;
    if again != plan {
        return Err("same seed gave a different plan".into());
    }
    Ok(())
}
