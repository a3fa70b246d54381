//! The 21 physicochemical descriptors used as pseudo-label components and
//! baseline-model features.
//!
//! Counts follow simple published definitions: hydrogen-bond donors are N/O
//! atoms carrying hydrogen, acceptors are all N/O atoms, stereocentres are
//! atoms with an explicit tetrahedral mark. Ring-based counts use the SSSR
//! of the canonically renumbered molecule so that they do not depend on how
//! the input was written.

mod crippen;
mod tables;
mod topology;
mod tpsa;

use serde::{Deserialize, Serialize};

use crate::chem::{canonical_order, BondOrder, Element, Molecule};

pub use crippen::{atom_types, contribution, crippen_logp_mr, AtomType, Contribution};
pub use topology::{balaban_j, bertz_ct, kappa_indices};
pub(crate) use tables::fnv1a64;
pub use tpsa::{atom_contribution as tpsa_contribution, tpsa};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DescriptorError {
    #[error("atom {atom} ({symbol}) has no entry in the {table} table: {environment}")]
    MissingContribution {
        atom: usize,
        symbol: String,
        table: &'static str,
        environment: String,
    },
    #[error("contribution table {table} is corrupt: {reason}")]
    Table { table: String, reason: String },
}

/// Number of descriptors per molecule.
pub const DESCRIPTOR_COUNT: usize = 21;

/// Column names in output order.
pub const DESCRIPTOR_NAMES: [&str; DESCRIPTOR_COUNT] = [
    "hbd",
    "hba",
    "rotatable_bonds",
    "tpsa",
    "stereocenters",
    "logp",
    "molar_refractivity",
    "frac_csp3",
    "ring_count",
    "heterocycles",
    "aromatic_rings",
    "aromatic_heterocycles",
    "spiro_atoms",
    "mol_weight",
    "heteroatoms",
    "heavy_atoms",
    "kappa1",
    "kappa2",
    "kappa3",
    "balaban_j",
    "bertz_ct",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorVector {
    pub hbd: u32,
    pub hba: u32,
    pub rotatable_bonds: u32,
    /// Å²
    pub tpsa: f64,
    pub stereocenters: u32,
    pub logp: f64,
    /// cm³/mol
    pub molar_refractivity: f64,
    pub frac_csp3: f64,
    pub ring_count: u32,
    pub heterocycles: u32,
    pub aromatic_rings: u32,
    pub aromatic_heterocycles: u32,
    pub spiro_atoms: u32,
    /// g/mol
    pub mol_weight: f64,
    pub heteroatoms: u32,
    pub heavy_atoms: u32,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub balaban_j: f64,
    pub bertz_ct: f64,
}

impl DescriptorVector {
    /// Values in [`DESCRIPTOR_NAMES`] order.
    pub fn to_array(&self) -> [f64; DESCRIPTOR_COUNT] {
        [
            f64::from(self.hbd),
            f64::from(self.hba),
            f64::from(self.rotatable_bonds),
            self.tpsa,
            f64::from(self.stereocenters),
            self.logp,
            self.molar_refractivity,
            self.frac_csp3,
            f64::from(self.ring_count),
            f64::from(self.heterocycles),
            f64::from(self.aromatic_rings),
            f64::from(self.aromatic_heterocycles),
            f64::from(self.spiro_atoms),
            self.mol_weight,
            f64::from(self.heteroatoms),
            f64::from(self.heavy_atoms),
            self.kappa1,
            self.kappa2,
            self.kappa3,
            self.balaban_j,
            self.bertz_ct,
        ]
    }
}

fn is_n_or_o(e: Element) -> bool {
    e == Element::N || e == Element::O
}

/// Hybridization used for the sp3 fraction: non-aromatic with only single bonds.
fn is_sp3(mol: &Molecule, i: usize) -> bool {
    !mol.atom(i).aromatic
        && mol
            .neighbors(i)
            .iter()
            .all(|&(_, b)| mol.bond(b).order == BondOrder::Single)
}

fn is_amide_cn(mol: &Molecule, c: usize, n: usize) -> bool {
    mol.atom(c).element == Element::C
        && mol.atom(n).element == Element::N
        && mol.neighbors(c).iter().any(|&(o, b)| {
            mol.atom(o).element == Element::O && mol.bond(b).order == BondOrder::Double
        })
}

fn rotatable_bonds(mol: &Molecule) -> u32 {
    let mut count = 0;
    for b in mol.bonds() {
        if b.order != BondOrder::Single || b.in_ring {
            continue;
        }
        let (x, y) = (b.begin, b.end);
        if !mol.atom(x).is_heavy() || !mol.atom(y).is_heavy() {
            continue;
        }
        if mol.heavy_degree(x) < 2 || mol.heavy_degree(y) < 2 {
            continue;
        }
        if is_amide_cn(mol, x, y) || is_amide_cn(mol, y, x) {
            continue;
        }
        count += 1;
    }
    count
}

struct RingCounts {
    heterocycles: u32,
    aromatic: u32,
    aromatic_hetero: u32,
    spiro: u32,
}

fn ring_counts(mol: &Molecule) -> RingCounts {
    let rings = mol.rings();
    let hetero = |r: &Vec<usize>| r.iter().any(|&a| mol.atom(a).element != Element::C);
    let aromatic = |r: &Vec<usize>| r.iter().all(|&a| mol.atom(a).aromatic);
    let mut spiro = 0;
    for atom in 0..mol.num_atoms() {
        let containing: Vec<&Vec<usize>> = rings.iter().filter(|r| r.contains(&atom)).collect();
        let is_spiro = containing.iter().enumerate().any(|(k, r1)| {
            containing[k + 1..]
                .iter()
                .any(|r2| r1.iter().filter(|a| r2.contains(a)).count() == 1)
        });
        if is_spiro {
            spiro += 1;
        }
    }
    RingCounts {
        heterocycles: rings.iter().filter(|r| hetero(r)).count() as u32,
        aromatic: rings.iter().filter(|r| aromatic(r)).count() as u32,
        aromatic_hetero: rings.iter().filter(|r| hetero(r) && aromatic(r)).count() as u32,
        spiro,
    }
}

/// Molecular weight including implicit and explicit hydrogens, g/mol.
pub fn mol_weight(mol: &Molecule) -> f64 {
    mol.atoms()
        .iter()
        .map(|a| a.element.atomic_weight() + f64::from(a.total_h()) * Element::H.atomic_weight())
        .sum()
}

pub fn compute_descriptors(mol: &Molecule) -> Result<DescriptorVector, DescriptorError> {
    let canonical = mol.renumbered(&canonical_order(mol));
    let mol = &canonical;
    let (logp, mr) = crippen_logp_mr(mol)?;
    let tpsa = tpsa(mol)?;
    let (kappa1, kappa2, kappa3) = kappa_indices(mol);
    let rc = ring_counts(mol);

    let mut hbd = 0;
    let mut hba = 0;
    let mut stereocenters = 0;
    let mut carbons = 0;
    let mut sp3_carbons = 0;
    let mut heteroatoms = 0;
    let mut heavy_atoms = 0;
    for (i, a) in mol.atoms().iter().enumerate() {
        if is_n_or_o(a.element) {
            hba += 1;
            if mol.hydrogen_count(i) > 0 {
                hbd += 1;
            }
        }
        if a.chirality.is_marked() {
            stereocenters += 1;
        }
        if a.element == Element::C {
            carbons += 1;
            if is_sp3(mol, i) {
                sp3_carbons += 1;
            }
        }
        if a.is_heavy() {
            heavy_atoms += 1;
            if a.element != Element::C {
                heteroatoms += 1;
            }
        }
    }
    Ok(DescriptorVector {
        hbd,
        hba,
        rotatable_bonds: rotatable_bonds(mol),
        tpsa,
        stereocenters,
        logp,
        molar_refractivity: mr,
        frac_csp3: if carbons == 0 {
            0.0
        } else {
            f64::from(sp3_carbons) / f64::from(carbons)
        },
        ring_count: mol.cyclomatic_number() as u32,
        heterocycles: rc.heterocycles,
        aromatic_rings: rc.aromatic,
        aromatic_heterocycles: rc.aromatic_hetero,
        spiro_atoms: rc.spiro,
        mol_weight: mol_weight(mol),
        heteroatoms,
        heavy_atoms,
        kappa1,
        kappa2,
        kappa3,
        balaban_j: balaban_j(mol),
        bertz_ct: bertz_ct(mol),
    })
}
