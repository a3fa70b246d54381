//! Hückel aromaticity perception and kekulization of leftover aromatic input.
//!
//! Candidate rings are all simple cycles of five to seven atoms. A ring is
//! aromatic when every member contributes a known number of pi electrons
//! and the total is 4n+2. Pairs of non-aromatic candidate rings fused on one
//! bond are then tested as a single envelope (azulene-type systems).

use std::collections::BTreeSet;

use super::element::Element;
use super::molecule::{BondOrder, Molecule};
use super::rings::all_simple_cycles;

/// Pi-electron contribution of `atom` to a ring it belongs to, or `None`
/// when the atom cannot be part of an aromatic system.
pub(crate) fn pi_electrons(mol: &Molecule, atom: usize) -> Option<u8> {
    let a = mol.atom(atom);
    let connections = mol.degree(atom) + usize::from(a.total_h());
    let charge = a.formal_charge;
    let mut doubles = mol
        .neighbors(atom)
        .iter()
        .filter(|&&(_, b)| mol.bond(b).order == BondOrder::Double);
    if mol.has_bond_of_order(atom, BondOrder::Triple) {
        return None;
    }
    if let Some(&(_, bi)) = doubles.next() {
        if doubles.next().is_some() || connections > 3 {
            return None;
        }
        return Some(if mol.bond(bi).in_ring { 1 } else { 0 });
    }
    let el = a.element;
    if a.aromatic {
        return match (el, charge) {
            (Element::C, 0) => Some(1),
            (Element::C, -1) => Some(2),
            (Element::C, 1) => Some(0),
            (Element::N | Element::P, 0) => Some(if connections >= 3 { 2 } else { 1 }),
            (Element::N | Element::P, 1) => Some(1),
            (Element::N | Element::P, -1) => Some(2),
            (Element::B, 0) => Some(0),
            (Element::B, -1) => Some(1),
            (e, 0) if matches!(e.atomic_number(), 8 | 16 | 34 | 52) => Some(2),
            (e, 1) if matches!(e.atomic_number(), 8 | 16 | 34 | 52) => Some(1),
            _ => None,
        };
    }
    match (el, charge, connections) {
        (Element::C, -1, 3) => Some(2),
        (Element::C, 1, 3) => Some(0),
        (Element::N | Element::P, 0, 3) => Some(2),
        (Element::N | Element::P, -1, 2) => Some(2),
        (Element::B, 0, 3) => Some(0),
        (e, 0, 2) if matches!(e.atomic_number(), 8 | 16 | 34 | 52) => Some(2),
        _ => None,
    }
}

fn huckel(total: u32) -> bool {
    total % 4 == 2
}

fn cycle_bond_indices(mol: &Molecule, cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len())
        .filter_map(|i| mol.bond_between(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect()
}

pub(crate) fn perceive(mol: &mut Molecule) -> Result<(), String> {
    let cycles = all_simple_cycles(mol, 5, 7);
    let electrons: Vec<Option<u8>> = (0..mol.num_atoms()).map(|i| pi_electrons(mol, i)).collect();
    let count = |atoms: &mut dyn Iterator<Item = usize>| -> Option<u32> {
        let mut total = 0u32;
        for a in atoms {
            total += u32::from(electrons[a]?);
        }
        Some(total)
    };

    let mut aromatic_atoms = vec![false; mol.num_atoms()];
    let mut aromatic_bonds = vec![false; mol.num_bonds()];
    let mut ring_is_aromatic = vec![false; cycles.len()];
    for (ci, cycle) in cycles.iter().enumerate() {
        if count(&mut cycle.iter().copied()).is_some_and(huckel) {
            ring_is_aromatic[ci] = true;
        }
    }
    for (ci, a) in cycles.iter().enumerate() {
        let bonds_a: BTreeSet<usize> = cycle_bond_indices(mol, a).into_iter().collect();
        if ring_is_aromatic[ci] {
            for &x in a {
                aromatic_atoms[x] = true;
            }
            for &b in &bonds_a {
                aromatic_bonds[b] = true;
            }
            continue;
        }
        for (cj, b) in cycles.iter().enumerate().skip(ci + 1) {
            if ring_is_aromatic[cj] {
                continue;
            }
            let bonds_b: BTreeSet<usize> = cycle_bond_indices(mol, b).into_iter().collect();
            let shared_atoms = a.iter().filter(|x| b.contains(x)).count();
            if bonds_a.intersection(&bonds_b).count() != 1 || shared_atoms != 2 {
                continue;
            }
            let union: BTreeSet<usize> = a.iter().chain(b.iter()).copied().collect();
            if count(&mut union.iter().copied()).is_some_and(huckel) {
                for &x in &union {
                    aromatic_atoms[x] = true;
                }
                for &bond in bonds_a.iter().chain(bonds_b.iter()) {
                    aromatic_bonds[bond] = true;
                }
            }
        }
    }

    // Atoms written aromatic but not perceived as such need a Kekulé form.
    let mut leftover_bonds = Vec::new();
    for (bi, bond) in mol.bonds.iter().enumerate() {
        if bond.order == BondOrder::Aromatic && !aromatic_bonds[bi] {
            leftover_bonds.push(bi);
        }
    }
    let needs_pi: Vec<usize> = (0..mol.num_atoms())
        .filter(|&i| {
            mol.atoms[i].aromatic
                && !aromatic_atoms[i]
                && electrons[i] == Some(1)
                && !mol.has_bond_of_order(i, BondOrder::Double)
        })
        .collect();
    if !needs_pi.is_empty() || !leftover_bonds.is_empty() {
        let doubles = kekulize(mol, &needs_pi, &leftover_bonds)
            .ok_or_else(|| "aromatic system has no valid Kekulé structure".to_string())?;
        for bi in leftover_bonds {
            mol.bonds[bi].order = if doubles.contains(&bi) {
                BondOrder::Double
            } else {
                BondOrder::Single
            };
        }
    }

    for (i, atom) in mol.atoms.iter_mut().enumerate() {
        atom.aromatic = aromatic_atoms[i];
    }
    for (bi, bond) in mol.bonds.iter_mut().enumerate() {
        if aromatic_bonds[bi] {
            bond.order = BondOrder::Aromatic;
        }
    }
    Ok(())
}

/// Perfect matching of `atoms` using only `bonds`; returns matched bonds.
fn kekulize(mol: &Molecule, atoms: &[usize], bonds: &[usize]) -> Option<BTreeSet<usize>> {
    let needs: BTreeSet<usize> = atoms.iter().copied().collect();
    let usable: Vec<usize> = bonds
        .iter()
        .copied()
        .filter(|&b| needs.contains(&mol.bond(b).begin) && needs.contains(&mol.bond(b).end))
        .collect();
    let mut matched = vec![false; mol.num_atoms()];
    let mut chosen = BTreeSet::new();
    let order: Vec<usize> = atoms.to_vec();
    if assign(mol, &order, 0, &usable, &mut matched, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn assign(
    mol: &Molecule,
    order: &[usize],
    pos: usize,
    usable: &[usize],
    matched: &mut [bool],
    chosen: &mut BTreeSet<usize>,
) -> bool {
    let Some(next) = (pos..order.len()).find(|&k| !matched[order[k]]) else {
        return true;
    };
    let atom = order[next];
    for &b in usable {
        let bond = mol.bond(b);
        if !bond.contains(atom) {
            continue;
        }
        let other = bond.other(atom);
        if matched[other] {
            continue;
        }
        matched[atom] = true;
        matched[other] = true;
        chosen.insert(b);
        if assign(mol, order, next + 1, usable, matched, chosen) {
            return true;
        }
        chosen.remove(&b);
        matched[atom] = false;
        matched[other] = false;
    }
    false
}
