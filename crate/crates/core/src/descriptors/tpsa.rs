//! Topological polar surface area from nitrogen and oxygen fragment
//! contributions.
//!
//! Environments missing from the table (for example amide anions or bare
//! water) fall back to a linear estimate in heavy-neighbour and hydrogen
//! counts, clamped at zero.

use std::sync::OnceLock;

use crate::chem::{BondOrder, Molecule};

use super::tables::{load_rows, TPSA_TSV};
use super::DescriptorError;

#[derive(Debug, Clone, PartialEq)]
struct Row {
    element: u8,
    charge: i8,
    degree: usize,
    hydrogens: usize,
    single: usize,
    double: usize,
    triple: usize,
    aromatic: usize,
    /// `None` matches either.
    three_ring: Option<bool>,
    value: f64,
}

fn rows() -> Result<&'static [Row], DescriptorError> {
    static ROWS: OnceLock<Result<Vec<Row>, DescriptorError>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let mut out = Vec::new();
        for r in load_rows("tpsa", TPSA_TSV)? {
            let bad = || DescriptorError::Table {
                table: "tpsa".into(),
                reason: format!("malformed row {r:?}"),
            };
            if r.len() < 10 {
                return Err(bad());
            }
            let int = |k: usize| r[k].parse::<usize>().map_err(|_| bad());
            out.push(Row {
                element: match r[0].as_str() {
                    "N" => 7,
                    "O" => 8,
                    _ => return Err(bad()),
                },
                charge: r[1].parse().map_err(|_| bad())?,
                degree: int(2)?,
                hydrogens: int(3)?,
                single: int(4)?,
                double: int(5)?,
                triple: int(6)?,
                aromatic: int(7)?,
                three_ring: match r[8].as_str() {
                    "*" => None,
                    "0" => Some(false),
                    "1" => Some(true),
                    _ => return Err(bad()),
                },
                value: r[9].parse().map_err(|_| bad())?,
            });
        }
        Ok(out)
    })
    .as_deref()
    .map_err(Clone::clone)
}

fn in_three_ring(mol: &Molecule, atom: usize) -> bool {
    mol.rings().iter().any(|r| r.len() == 3 && r.contains(&atom))
}

/// Contribution of one atom; zero for anything but N and O.
pub fn atom_contribution(mol: &Molecule, atom: usize) -> Result<f64, DescriptorError> {
    let a = mol.atom(atom);
    let element = a.element.atomic_number();
    if element != 7 && element != 8 {
        return Ok(0.0);
    }
    let degree = mol.heavy_degree(atom);
    let hydrogens = mol.hydrogen_count(atom);
    let (mut single, mut double, mut triple, mut aromatic) = (0, 0, 0, 0);
    for &(nb, b) in mol.neighbors(atom) {
        if !mol.atom(nb).is_heavy() {
            continue;
        }
        match mol.bond(b).order {
            BondOrder::Single => single += 1,
            BondOrder::Double => double += 1,
            BondOrder::Triple => triple += 1,
            BondOrder::Aromatic => aromatic += 1,
        }
    }
    let ring3 = in_three_ring(mol, atom);
    let hit = rows()?.iter().find(|r| {
        r.element == element
            && r.charge == a.formal_charge
            && r.degree == degree
            && r.hydrogens == hydrogens
            && r.single == single
            && r.double == double
            && r.triple == triple
            && r.aromatic == aromatic
            && r.three_ring.is_none_or(|f| f == ring3)
    });
    if let Some(row) = hit {
        return Ok(row.value);
    }
    let (base, per_neighbor) = if element == 7 { (30.5, 8.2) } else { (28.5, 8.6) };
    Ok((base - per_neighbor * degree as f64 + 1.5 * hydrogens as f64).max(0.0))
}

pub fn tpsa(mol: &Molecule) -> Result<f64, DescriptorError> {
    (0..mol.num_atoms()).try_fold(0.0, |acc, i| Ok(acc + atom_contribution(mol, i)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn t(s: &str) -> f64 {
        tpsa(&parse_smiles(s).unwrap()).unwrap()
    }

    #[test]
    fn simple_values() {
        assert_eq!(t("C"), 0.0);
        assert!((t("CCO") - 20.23).abs() < 1e-12);
        assert!((t("CC(=O)O") - (17.07 + 20.23)).abs() < 1e-12);
        assert!((t("c1ccncc1") - 12.89).abs() < 1e-12);
        assert!((t("C1CO1") - 12.53).abs() < 1e-12);
    }

    #[test]
    fn fallback_for_unlisted_environments() {
        assert!((t("O") - 31.5).abs() < 1e-12);
        assert!((t("N") - 35.0).abs() < 1e-12);
        // Sulfonimide nitrogen anion: 30.5 - 2 * 8.2.
        let n_minus = parse_smiles("CS(=O)(=O)[N-]S(C)(=O)=O").unwrap();
        let idx = (0..n_minus.num_atoms())
            .find(|&i| n_minus.atom(i).formal_charge == -1)
            .unwrap();
        assert!((atom_contribution(&n_minus, idx).unwrap() - 14.1).abs() < 1e-12);
    }
}
