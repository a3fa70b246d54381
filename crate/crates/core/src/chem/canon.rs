//! Canonical atom ranking.
//!
//! Atoms are partitioned by local invariants and the partition is refined
//! by neighbour classes until stable. Remaining ties are broken by
//! individualizing each member of the first tied cell in turn; every
//! discrete partition reached is written out and the smallest string wins.
//! Interchangeable terminal atoms (same parent, same labels, no stereo) are
//! explored only once.

use super::molecule::{BondStereo, Chirality, Molecule};
use super::writer::emit;

/// Atom indices of `mol` in the order they appear in its canonical SMILES.
pub fn canonical_order(mol: &Molecule) -> Vec<usize> {
    canonical_smiles(mol).1
}

pub(crate) fn canonical_smiles(mol: &Molecule) -> (String, Vec<usize>) {
    if mol.is_empty() {
        return (String::new(), Vec::new());
    }
    let classes = initial_classes(mol);
    let mut best: Option<(String, Vec<usize>)> = None;
    search(mol, classes, &mut best);
    best.expect("search reaches at least one leaf")
}

type Invariant = (usize, u8, i8, u8, bool, u16, u8, bool, usize);

fn invariant(mol: &Molecule, i: usize) -> Invariant {
    let a = mol.atom(i);
    let stereo_bonds = mol
        .neighbors(i)
        .iter()
        .filter(|&&(_, b)| mol.bond(b).stereo != BondStereo::None)
        .count();
    (
        mol.heavy_degree(i),
        a.element.atomic_number(),
        a.formal_charge,
        a.total_h(),
        a.aromatic,
        a.isotope.unwrap_or(0),
        match a.chirality {
            Chirality::None => 0,
            _ => 1,
        },
        mol.atom_in_ring(i),
        stereo_bonds,
    )
}

fn initial_classes(mol: &Molecule) -> Vec<u32> {
    let inv: Vec<Invariant> = (0..mol.num_atoms()).map(|i| invariant(mol, i)).collect();
    compact(&inv)
}

/// Maps each key to the index of its value among the sorted distinct keys.
fn compact<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present") as u32)
        .collect()
}

fn count_classes(classes: &[u32]) -> usize {
    let mut seen: Vec<u32> = classes.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Iterated neighbour refinement. Class order is preserved: a refined
/// class always sorts inside the class it came from.
fn refine(mol: &Molecule, mut classes: Vec<u32>) -> Vec<u32> {
    let mut count = count_classes(&classes);
    loop {
        let keys: Vec<(u32, Vec<(u32, u8, u8)>)> = (0..mol.num_atoms())
            .map(|i| {
                let mut nbs: Vec<(u32, u8, u8)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(nb, b)| {
                        let bond = mol.bond(b);
                        (classes[nb], bond.order.code(), bond.stereo as u8)
                    })
                    .collect();
                nbs.sort_unstable();
                (classes[i], nbs)
            })
            .collect();
        let next = compact(&keys);
        let next_count = count_classes(&next);
        classes = next;
        if next_count == count {
            return classes;
        }
        count = next_count;
    }
}

fn search(mol: &Molecule, classes: Vec<u32>, best: &mut Option<(String, Vec<usize>)>) {
    let classes = refine(mol, classes);
    let n = mol.num_atoms();
    let mut sizes = vec![0usize; n];
    for &c in &classes {
        sizes[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let rank: Vec<usize> = classes.iter().map(|&c| c as usize).collect();
        let candidate = emit(mol, &rank);
        if best.as_ref().is_none_or(|(s, _)| candidate.0 < *s) {
            *best = Some(candidate);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&i| classes[i] as usize == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        if tried.iter().any(|&u| interchangeable_leaves(mol, u, v)) {
            continue;
        }
        tried.push(v);
        let split: Vec<u32> = (0..n)
            .map(|i| {
                let bump = u32::from(classes[i] as usize == target && i != v);
                classes[i] * 2 + bump
            })
            .collect();
        search(mol, split, best);
    }
}

/// Two terminal atoms hanging off the same parent with identical labels
/// and no stereo involvement; swapping them is an automorphism.
fn interchangeable_leaves(mol: &Molecule, u: usize, v: usize) -> bool {
    if mol.degree(u) != 1 || mol.degree(v) != 1 {
        return false;
    }
    let (pu, bu) = mol.neighbors(u)[0];
    let (pv, bv) = mol.neighbors(v)[0];
    if pu != pv {
        return false;
    }
    let (au, av) = (mol.atom(u), mol.atom(v));
    let (bond_u, bond_v) = (mol.bond(bu), mol.bond(bv));
    let parent_plain = !mol.atom(pu).chirality.is_marked()
        && mol
            .neighbors(pu)
            .iter()
            .all(|&(_, b)| mol.bond(b).stereo == BondStereo::None);
    parent_plain
        && au == av
        && !au.chirality.is_marked()
        && bond_u.order == bond_v.order
        && bond_u.stereo == BondStereo::None
        && bond_v.stereo == BondStereo::None
}
