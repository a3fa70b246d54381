//! Extended-connectivity (Morgan) identifiers.

use std::collections::{BTreeSet, HashSet};

use crate::chem::Molecule;

use super::hash::hash_words;

fn bond_code(mol: &Molecule, b: usize) -> u64 {
    match mol.bond(b).order {
        crate::chem::BondOrder::Single => 1,
        crate::chem::BondOrder::Double => 2,
        crate::chem::BondOrder::Triple => 3,
        crate::chem::BondOrder::Aromatic => 4,
    }
}

/// Radius-0 identifier: element, charge, heavy degree, hydrogen count,
/// aromaticity and ring membership.
pub fn atom_invariant(mol: &Molecule, i: usize) -> u64 {
    let a = mol.atom(i);
    hash_words(&[
        u64::from(a.element.atomic_number()),
        a.formal_charge as i64 as u64,
        mol.heavy_degree(i) as u64,
        mol.hydrogen_count(i) as u64,
        u64::from(a.aromatic),
        u64::from(mol.atom_in_ring(i)),
    ])
}

/// All identifiers up to `radius`, before folding.
///
/// Layer `r` rehashes each atom's layer `r-1` identifier with its sorted
/// `(bond order, neighbour identifier)` list. An environment whose bond set
/// already appeared (at a smaller radius, or at the same radius with a
/// smaller identifier) contributes nothing.
pub fn ecfp_identifiers(mol: &Molecule, radius: u32) -> BTreeSet<u64> {
    let mol = mol.without_explicit_hydrogens();
    let n = mol.num_atoms();
    let mut ids: Vec<u64> = (0..n).map(|i| atom_invariant(&mol, i)).collect();
    let mut out: BTreeSet<u64> = ids.iter().copied().collect();
    let mut envs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for layer in 1..=radius {
        let mut next_ids = Vec::with_capacity(n);
        let mut next_envs = Vec::with_capacity(n);
        for i in 0..n {
            let mut nbrs: Vec<(u64, u64)> = mol
                .neighbors(i)
                .iter()
                .map(|&(nb, b)| (bond_code(&mol, b), ids[nb]))
                .collect();
            nbrs.sort_unstable();
            let mut words = vec![u64::from(layer), ids[i]];
            for (code, id) in nbrs {
                words.push(code);
                words.push(id);
            }
            next_ids.push(hash_words(&words));
            let mut env = envs[i].clone();
            for &(nb, b) in mol.neighbors(i) {
                env.insert(b);
                env.extend(envs[nb].iter().copied());
            }
            next_envs.push(env);
        }
        let mut candidates: Vec<(Vec<usize>, u64, usize)> = (0..n)
            .filter(|&i| !next_envs[i].is_empty() && next_envs[i] != envs[i])
            .map(|i| (next_envs[i].iter().copied().collect(), next_ids[i], i))
            .collect();
        candidates.sort_unstable();
        for (env, id, _) in candidates {
            if seen.insert(env) {
                out.insert(id);
            }
        }
        ids = next_ids;
        envs = next_envs;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn ids(s: &str, r: u32) -> BTreeSet<u64> {
        ecfp_identifiers(&parse_smiles(s).unwrap(), r)
    }

    #[test]
    fn small_cases() {
        assert_eq!(ids("C", 0).len(), 1);
        assert_eq!(ids("C", 3).len(), 1);
        assert_eq!(ids("CC", 1).len(), 2);
        // Radius 2 adds nothing: the single bond is already covered.
        assert_eq!(ids("CC", 2), ids("CC", 1));
        assert_eq!(ids("c1ccccc1", 2).len(), 3);
    }

    #[test]
    fn explicit_hydrogens_ignored() {
        assert_eq!(ids("[H]OC([H])([H])C", 2), ids("CCO", 2));
    }
}
