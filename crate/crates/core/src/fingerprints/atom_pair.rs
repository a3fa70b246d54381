//! Atom-pair identifiers over heavy atoms.

use std::collections::{BTreeSet, VecDeque};

use crate::chem::{BondOrder, Molecule};

use super::hash::hash_words;

/// Distances beyond this are binned together.
pub const MAX_DISTANCE: usize = 30;

/// `(atomic number, heavy degree, π-bond count)`; an aromatic atom counts
/// one π bond.
pub fn atom_type(mol: &Molecule, i: usize) -> (u8, usize, usize) {
    let mut pi = 0;
    let mut aromatic = false;
    for &(_, b) in mol.neighbors(i) {
        match mol.bond(b).order {
            BondOrder::Double => pi += 1,
            BondOrder::Triple => pi += 2,
            BondOrder::Aromatic => aromatic = true,
            BondOrder::Single => {}
        }
    }
    if aromatic || mol.atom(i).aromatic {
        pi += 1;
    }
    (mol.atom(i).element.atomic_number(), mol.heavy_degree(i), pi)
}

fn type_word((z, degree, pi): (u8, usize, usize)) -> u64 {
    (u64::from(z) << 16) | ((degree as u64) << 8) | pi as u64
}

fn distances(mol: &Molecule, heavy: &[bool], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; mol.num_atoms()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(a) = queue.pop_front() {
        let d = dist[a].unwrap_or(0);
        for &(nb, _) in mol.neighbors(a) {
            if heavy[nb] && dist[nb].is_none() {
                dist[nb] = Some(d + 1);
                queue.push_back(nb);
            }
        }
    }
    dist
}

/// Distinct pair identifiers, before folding. Atoms in different
/// components do not pair.
pub fn atom_pair_identifiers(mol: &Molecule) -> BTreeSet<u64> {
    let heavy: Vec<bool> = mol.atoms().iter().map(|a| a.is_heavy()).collect();
    let types: Vec<u64> = (0..mol.num_atoms())
        .map(|i| type_word(atom_type(mol, i)))
        .collect();
    let mut out = BTreeSet::new();
    for i in (0..mol.num_atoms()).filter(|&i| heavy[i]) {
        let dist = distances(mol, &heavy, i);
        for j in (i + 1..mol.num_atoms()).filter(|&j| heavy[j]) {
            if let Some(d) = dist[j] {
                let (a, b) = (types[i].min(types[j]), types[i].max(types[j]));
                out.insert(hash_words(&[a, b, d.min(MAX_DISTANCE) as u64]));
            }
        }
    }
    out
}
