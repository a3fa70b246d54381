//! Node and edge feature encodings for molecular graphs and multi-molecule
//! systems.
//!
//! Atom rows are 38 wide:
//!
//! | columns | block |
//! |---|---|
//! | 0..13  | element: H B C N O F Si P S Cl Br I, other |
//! | 13..20 | degree 0..6 (clipped) |
//! | 20..24 | hybridization: sp, sp2, sp3, other |
//! | 24..30 | hydrogen count 0..5 (clipped) |
//! | 30     | aromatic |
//! | 31..36 | formal charge -2..+2 (clipped) |
//! | 36     | donor (N or O carrying hydrogen) |
//! | 37     | acceptor (N or O) |
//!
//! Bond rows are 9 wide: type (single, double, triple, aromatic), stereo
//! (none, cis, trans), conjugated, in ring.
//!
//! Rows follow canonical atom order; bonds are sorted by their canonical
//! endpoint pair.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::chem::{canonical_order, parse_smiles, BondOrder, BondStereo, Element, Molecule};
use crate::datasets::{Category, Role, SystemRecord};

pub const ATOM_FEATURE_WIDTH: usize = 38;
pub const BOND_FEATURE_WIDTH: usize = 9;
pub const FEATURE_SCHEMA_VERSION: u32 = 1;

const ELEMENT_VOCAB: [Element; 12] = [
    Element::H,
    Element::B,
    Element::C,
    Element::N,
    Element::O,
    Element::F,
    Element::SI,
    Element::P,
    Element::S,
    Element::CL,
    Element::BR,
    Element::I,
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeaturizeError {
    #[error("record does not match its category: {0}")]
    RoleMismatch(String),
    #[error("{role} '{smiles}' does not parse: {message}")]
    Parse {
        role: Role,
        smiles: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hybridization {
    Sp,
    Sp2,
    Sp3,
    Other,
}

impl Hybridization {
    fn index(self) -> usize {
        match self {
            Hybridization::Sp => 0,
            Hybridization::Sp2 => 1,
            Hybridization::Sp3 => 2,
            Hybridization::Other => 3,
        }
    }
}

/// Aromatic → sp2, any triple → sp, any double → sp2, otherwise sp3.
/// Hydrogen and elements without a valence model get "other".
pub fn hybridization(mol: &Molecule, atom: usize) -> Hybridization {
    let a = mol.atom(atom);
    if a.element.is_hydrogen() || a.element.max_valence(a.formal_charge).is_none() {
        return Hybridization::Other;
    }
    if a.aromatic || mol.has_bond_of_order(atom, BondOrder::Aromatic) {
        Hybridization::Sp2
    } else if mol.has_bond_of_order(atom, BondOrder::Triple) {
        Hybridization::Sp
    } else if mol.has_bond_of_order(atom, BondOrder::Double) {
        Hybridization::Sp2
    } else {
        Hybridization::Sp3
    }
}

fn is_n_or_o(e: Element) -> bool {
    e == Element::N || e == Element::O
}

fn atom_row(mol: &Molecule, i: usize) -> Vec<u8> {
    let a = mol.atom(i);
    let mut row = vec![0u8; ATOM_FEATURE_WIDTH];
    let element = ELEMENT_VOCAB
        .iter()
        .position(|&e| e == a.element)
        .unwrap_or(ELEMENT_VOCAB.len());
    row[element] = 1;
    row[13 + mol.degree(i).min(6)] = 1;
    row[20 + hybridization(mol, i).index()] = 1;
    let h = mol.hydrogen_count(i);
    row[24 + h.min(5)] = 1;
    row[30] = u8::from(a.aromatic);
    row[31 + (a.formal_charge.clamp(-2, 2) + 2) as usize] = 1;
    row[36] = u8::from(is_n_or_o(a.element) && h > 0);
    row[37] = u8::from(is_n_or_o(a.element));
    row
}

fn has_multiple_bond_besides(mol: &Molecule, atom: usize, bond: usize) -> bool {
    mol.neighbors(atom)
        .iter()
        .any(|&(_, b)| b != bond && mol.bond(b).order != BondOrder::Single)
}

/// Aromatic bonds, and single bonds with a double, triple or aromatic bond
/// on each side.
pub fn is_conjugated(mol: &Molecule, bond: usize) -> bool {
    let b = mol.bond(bond);
    match b.order {
        BondOrder::Aromatic => true,
        BondOrder::Single => {
            has_multiple_bond_besides(mol, b.begin, bond)
                && has_multiple_bond_besides(mol, b.end, bond)
        }
        _ => false,
    }
}

fn bond_row(mol: &Molecule, k: usize) -> Vec<u8> {
    let b = mol.bond(k);
    let mut row = vec![0u8; BOND_FEATURE_WIDTH];
    row[match b.order {
        BondOrder::Single => 0,
        BondOrder::Double => 1,
        BondOrder::Triple => 2,
        BondOrder::Aromatic => 3,
    }] = 1;
    row[4 + match b.stereo {
        BondStereo::None => 0,
        BondStereo::Cis => 1,
        BondStereo::Trans => 2,
    }] = 1;
    row[7] = u8::from(is_conjugated(mol, k));
    row[8] = u8::from(b.in_ring);
    row
}

/// Feature rows and connectivity of one molecule in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeGraph {
    pub atoms: Vec<Vec<u8>>,
    /// Endpoint pairs `[i, j]` with `i < j`, local to the molecule.
    pub edges: Vec<[usize; 2]>,
    pub bonds: Vec<Vec<u8>>,
}

pub fn featurize_molecule(mol: &Molecule) -> MoleculeGraph {
    let canonical = mol.renumbered(&canonical_order(mol));
    let mol = &canonical;
    let atoms = (0..mol.num_atoms()).map(|i| atom_row(mol, i)).collect();
    let mut order: Vec<usize> = (0..mol.num_bonds()).collect();
    let key = |k: usize| {
        let b = mol.bond(k);
        (b.begin.min(b.end), b.begin.max(b.end))
    };
    order.sort_by_key(|&k| key(k));
    MoleculeGraph {
        atoms,
        edges: order.iter().map(|&k| key(k).into()).collect(),
        bonds: order.iter().map(|&k| bond_row(mol, k)).collect(),
    }
}

/// Atom feature rows in canonical order.
pub fn atom_features(mol: &Molecule) -> Vec<Vec<u8>> {
    featurize_molecule(mol).atoms
}

/// Bond feature rows sorted by canonical endpoints.
pub fn bond_features(mol: &Molecule) -> Vec<Vec<u8>> {
    featurize_molecule(mol).bonds
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleGraph {
    pub role: Role,
    pub smiles: String,
    /// Index of this molecule's first node in the concatenated node list.
    pub node_offset: usize,
    #[serde(flatten)]
    pub graph: MoleculeGraph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemGraph {
    pub schema_version: u32,
    pub atom_feature_width: usize,
    pub bond_feature_width: usize,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub molecules: Vec<RoleGraph>,
    /// Kelvin; present only for categories that carry a temperature.
    #[serde(rename = "temperature_K")]
    pub temperature: Option<f64>,
    pub category: Category,
    pub category_one_hot: [f64; 4],
}

pub fn assemble_system(record: &SystemRecord) -> Result<SystemGraph, FeaturizeError> {
    record.validate().map_err(FeaturizeError::RoleMismatch)?;
    let mut molecules = Vec::new();
    let (mut nodes, mut edges) = (0, 0);
    for role in Role::ORDER {
        let Some(smiles) = record.role(role) else {
            continue;
        };
        let mol = parse_smiles(smiles).map_err(|e| FeaturizeError::Parse {
            role,
            smiles: smiles.to_string(),
            message: e.to_string(),
        })?;
        let graph = featurize_molecule(&mol);
        let node_offset = nodes;
        nodes += graph.atoms.len();
        edges += graph.edges.len();
        molecules.push(RoleGraph {
            role,
            smiles: smiles.to_string(),
            node_offset,
            graph,
        });
    }
    Ok(SystemGraph {
        schema_version: FEATURE_SCHEMA_VERSION,
        atom_feature_width: ATOM_FEATURE_WIDTH,
        bond_feature_width: BOND_FEATURE_WIDTH,
        num_nodes: nodes,
        num_edges: edges,
        molecules,
        temperature: if record.category.has_temperature() {
            record.temperature
        } else {
            None
        },
        category: record.category,
        category_one_hot: record.category.one_hot(),
    })
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(mut writer: W, systems: &[SystemGraph]) -> std::io::Result<()> {
    for s in systems {
        serde_json::to_writer(&mut writer, s)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
