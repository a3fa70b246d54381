//! Wildman–Crippen atom typing.
//!
//! Every heavy atom and every hydrogen (implicit or explicit) receives one
//! of the 72 published atom types; log P and molar refractivity are sums of
//! the per-type contributions read from the bundled table. Within each
//! element the rules are tried in the published order and the first match
//! wins.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chem::{BondOrder, Element, Molecule};

use super::tables::{load_rows, CRIPPEN_TSV};
use super::DescriptorError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    pub logp: f64,
    pub mr: f64,
}

fn table() -> Result<&'static HashMap<String, Contribution>, DescriptorError> {
    static TABLE: OnceLock<Result<HashMap<String, Contribution>, DescriptorError>> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            let rows = load_rows("crippen", CRIPPEN_TSV)?;
            let mut map = HashMap::new();
            for row in rows {
                let bad = || DescriptorError::Table {
                    table: "crippen".into(),
                    reason: format!("malformed row {row:?}"),
                };
                if row.len() != 3 {
                    return Err(bad());
                }
                let logp = row[1].parse().map_err(|_| bad())?;
                let mr = row[2].parse().map_err(|_| bad())?;
                map.insert(row[0].clone(), Contribution { logp, mr });
            }
            Ok(map)
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// Contribution for a type label such as `"C18"`.
pub fn contribution(label: &str) -> Result<Contribution, DescriptorError> {
    table()?
        .get(label)
        .copied()
        .ok_or_else(|| DescriptorError::Table {
            table: "crippen".into(),
            reason: format!("no row for type {label}"),
        })
}

#[derive(Clone, Copy)]
enum Bond {
    /// Unspecified bond: single or aromatic.
    Plain,
    Single,
    Double,
    Triple,
    Aromatic,
}

impl Bond {
    fn accepts(self, order: BondOrder) -> bool {
        match self {
            Bond::Plain => matches!(order, BondOrder::Single | BondOrder::Aromatic),
            Bond::Single => order == BondOrder::Single,
            Bond::Double => order == BondOrder::Double,
            Bond::Triple => order == BondOrder::Triple,
            Bond::Aromatic => order == BondOrder::Aromatic,
        }
    }
}

type Pred<'p> = &'p dyn Fn(usize) -> bool;

struct Typer<'m> {
    mol: &'m Molecule,
}

impl Typer<'_> {
    fn num(&self, i: usize) -> u8 {
        self.mol.atom(i).element.atomic_number()
    }
    fn arom(&self, i: usize) -> bool {
        self.mol.atom(i).aromatic
    }
    fn charge(&self, i: usize) -> i8 {
        self.mol.atom(i).formal_charge
    }
    fn h(&self, i: usize) -> usize {
        self.mol.hydrogen_count(i)
    }
    /// Total connections including implicit hydrogens.
    fn x(&self, i: usize) -> usize {
        self.mol.degree(i) + usize::from(self.mol.atom(i).total_h())
    }
    fn heavy(&self, i: usize) -> bool {
        self.num(i) != 1
    }
    fn aliphatic_heavy(&self, i: usize) -> bool {
        self.heavy(i) && !self.arom(i)
    }
    fn is(&self, i: usize, number: u8, aromatic: bool) -> bool {
        self.num(i) == number && self.arom(i) == aromatic
    }
    /// Aliphatic N, O, P, S or any halogen.
    fn hetero_set(&self, i: usize) -> bool {
        (!self.arom(i) && matches!(self.num(i), 7 | 8 | 15 | 16)) || matches!(self.num(i), 9 | 17 | 35 | 53)
    }

    /// Whether distinct neighbours of `i` (other than `exclude`) satisfy all
    /// of `wanted`.
    fn has(&self, i: usize, exclude: &[usize], wanted: &[(Bond, Pred)]) -> bool {
        let nbs: Vec<(usize, BondOrder)> = self
            .mol
            .neighbors(i)
            .iter()
            .filter(|(n, _)| !exclude.contains(n))
            .map(|&(n, b)| (n, self.mol.bond(b).order))
            .collect();
        let mut used = vec![false; nbs.len()];
        assign(&nbs, wanted, &mut used)
    }

    fn carbon(&self, i: usize) -> &'static str {
        let c = |j: usize| self.is(j, 6, false);
        let al = |j: usize| self.aliphatic_heavy(j);
        let het = |j: usize| self.hetero_set(j);
        let arom = |j: usize| self.arom(j);
        let (h, x) = (self.h(i), self.x(i));
        let p = Bond::Plain;
        if !self.arom(i) {
            if h == 4
                || (h == 3 && self.has(i, &[], &[(p, &c)]))
                || (h == 2 && self.has(i, &[], &[(p, &c), (p, &c)]))
            {
                return "C1";
            }
            if (h == 1 && self.has(i, &[], &[(p, &c), (p, &c), (p, &c)]))
                || self.has(i, &[], &[(p, &c), (p, &c), (p, &c), (p, &c)])
            {
                return "C2";
            }
            if (h == 3 && self.has(i, &[], &[(p, &het)]))
                || (h == 2 && x == 4 && self.has(i, &[], &[(p, &het), (p, &al)]))
            {
                return "C3";
            }
            if (h == 1 && x == 4 && self.has(i, &[], &[(p, &het), (p, &al), (p, &al)]))
                || (h == 0 && x == 4 && self.has(i, &[], &[(p, &het), (p, &al), (p, &al), (p, &al)]))
            {
                return "C4";
            }
            let non_c_aliphatic = |j: usize| al(j) && self.num(j) != 6;
            if self.has(i, &[], &[(Bond::Double, &non_c_aliphatic)]) {
                return "C5";
            }
            let d = Bond::Double;
            if (h == 2 && self.has(i, &[], &[(d, &c)]))
                || (h == 1 && self.has(i, &[], &[(d, &c), (p, &al)]))
                || (h == 0 && self.has(i, &[], &[(d, &c), (p, &al), (p, &al)]))
                || self.has(i, &[], &[(d, &c), (d, &c)])
            {
                return "C6";
            }
            if x == 2 && self.has(i, &[], &[(Bond::Triple, &al)]) {
                return "C7";
            }
            let aromatic_c = |j: usize| self.is(j, 6, true);
            if h == 3 && self.has(i, &[], &[(p, &aromatic_c)]) {
                return "C8";
            }
            if h == 3 && self.has(i, &[], &[(p, &arom)]) {
                return "C9";
            }
            if x == 4 && self.has(i, &[], &[(p, &arom)]) {
                match h {
                    2 => return "C10",
                    1 => return "C11",
                    0 => return "C12",
                    _ => {}
                }
            }
        } else {
            let odd = |j: usize| al(j) && !matches!(self.num(j), 6 | 7 | 8 | 16 | 9 | 17 | 35 | 53);
            if h == 0 && self.has(i, &[], &[(Bond::Single, &odd)]) {
                return "C13";
            }
            for (num, label) in [(9, "C14"), (17, "C15"), (35, "C16"), (53, "C17")] {
                let hal = move |j: usize| self.num(j) == num;
                if self.has(i, &[], &[(p, &hal)]) {
                    return label;
                }
            }
            if h == 1 {
                return "C18";
            }
            let a = Bond::Aromatic;
            let s = Bond::Single;
            if self.has(i, &[], &[(a, &arom), (a, &arom), (a, &arom)]) {
                return "C19";
            }
            if self.has(i, &[], &[(a, &arom), (a, &arom), (s, &arom)]) {
                return "C20";
            }
            for (num, label) in [(6, "C21"), (7, "C22"), (8, "C23"), (16, "C24")] {
                let sub = move |j: usize| self.is(j, num, false);
                if self.has(i, &[], &[(a, &arom), (a, &arom), (s, &sub)]) {
                    return label;
                }
            }
            let cno = |j: usize| !self.arom(j) && matches!(self.num(j), 6 | 7 | 8);
            if self.has(i, &[], &[(a, &arom), (a, &arom), (Bond::Double, &cno)]) {
                return "C25";
            }
        }
        if !self.arom(i) {
            let d = Bond::Double;
            let aromatic_c = |j: usize| self.is(j, 6, true);
            if self.has(i, &[], &[(d, &c), (p, &arom), (p, &al)])
                || self.has(i, &[], &[(d, &c), (p, &aromatic_c), (p, &arom)])
                || (h == 1 && self.has(i, &[], &[(d, &c), (p, &arom)]))
                || self.has(i, &[], &[(d, &aromatic_c)])
            {
                return "C26";
            }
            let odd = |j: usize| al(j) && !matches!(self.num(j), 6 | 7 | 8 | 15 | 16 | 9 | 17 | 35 | 53);
            if x == 4 && self.has(i, &[], &[(p, &odd)]) {
                return "C27";
            }
        }
        "CS"
    }

    fn nitrogen(&self, i: usize) -> &'static str {
        let al = |j: usize| self.aliphatic_heavy(j);
        let any = |j: usize| self.heavy(j);
        let arom = |j: usize| self.arom(j);
        let (h, q) = (self.h(i), self.charge(i));
        let p = Bond::Plain;
        if self.arom(i) {
            return if q == 0 {
                "N11"
            } else if q > 0 {
                "N12"
            } else {
                "NS"
            };
        }
        if q == 0 {
            if h == 2 && self.has(i, &[], &[(p, &al)]) {
                return "N1";
            }
            if h == 1 && self.has(i, &[], &[(p, &al), (p, &al)]) {
                return "N2";
            }
            if h == 2 && self.has(i, &[], &[(p, &arom)]) {
                return "N3";
            }
            if h == 1 && self.has(i, &[], &[(p, &any), (p, &arom)]) {
                return "N4";
            }
            if h == 1 && self.has(i, &[], &[(Bond::Double, &any)]) {
                return "N5";
            }
            if self.has(i, &[], &[(Bond::Double, &any), (p, &any)]) {
                return "N6";
            }
            if self.has(i, &[], &[(p, &al), (p, &al), (p, &al)]) {
                return "N7";
            }
            if self.has(i, &[], &[(p, &arom), (p, &any), (p, &al)])
                || self.has(i, &[], &[(p, &arom), (p, &arom), (p, &arom)])
            {
                return "N8";
            }
            if self.has(i, &[], &[(Bond::Triple, &al)]) {
                return "N9";
            }
        }
        if q > 0 && (1..=3).contains(&h) {
            return "N10";
        }
        if q > 0 && h == 0 {
            let carbon = |j: usize| self.num(j) == 6;
            let nitrogen = |j: usize| self.num(j) == 7;
            let d = Bond::Double;
            if self.has(i, &[], &[(p, &al), (p, &al), (p, &al), (p, &al)])
                || self.has(i, &[], &[(d, &al), (p, &al), (p, &any)])
                || self.has(i, &[], &[(d, &carbon), (d, &nitrogen)])
            {
                return "N13";
            }
        }
        if q > 0 && self.has(i, &[], &[(Bond::Triple, &al)]) {
            return "N14";
        }
        if q < 0 {
            return "N14";
        }
        if q > 0 {
            let anion_n = |j: usize| self.is(j, 7, false) && self.charge(j) < 0;
            let n = |j: usize| self.is(j, 7, false);
            if self.has(i, &[], &[(Bond::Double, &anion_n), (Bond::Double, &n)]) {
                return "N14";
            }
        }
        "NS"
    }

    fn oxygen(&self, i: usize) -> &'static str {
        let p = Bond::Plain;
        let d = Bond::Double;
        let al = |j: usize| self.aliphatic_heavy(j);
        let any = |j: usize| self.heavy(j);
        let arom = |j: usize| self.arom(j);
        let (h, q, x) = (self.h(i), self.charge(i), self.x(i));
        if self.arom(i) {
            return "O1";
        }
        if h == 1 || h == 2 {
            return "O2";
        }
        if self.has(i, &[], &[(p, &al), (p, &al)]) {
            return "O3";
        }
        if self.has(i, &[], &[(p, &arom), (p, &any)]) {
            return "O4";
        }
        let n_or_o = |j: usize| matches!(self.num(j), 7 | 8);
        let nitrogen = |j: usize| self.num(j) == 7;
        let sulfur = |j: usize| self.num(j) == 16;
        let neutral_sulfur = |j: usize| self.num(j) == 16 && self.charge(j) == 0;
        if self.has(i, &[], &[(d, &n_or_o)]) || (x == 1 && q < 0 && self.has(i, &[], &[(p, &nitrogen)])) {
            return "O5";
        }
        if (x == 1 && q < 0 && self.has(i, &[], &[(p, &sulfur)]))
            || (q == 0 && self.has(i, &[], &[(d, &neutral_sulfur)]))
        {
            return "O6";
        }
        if q == -1 {
            for &(c, _) in self.mol.neighbors(i) {
                if !self.is(c, 6, false) || !self.has(i, &[], &[(p, &|j| j == c)]) {
                    continue;
                }
                let oxo = |j: usize| self.is(j, 8, false);
                if self.has(c, &[i], &[(d, &oxo)]) {
                    return "O12";
                }
            }
        }
        if x == 1 && q < 0 {
            let other = |j: usize| self.heavy(j) && !self.is(j, 7, false) && !self.is(j, 16, false);
            if self.has(i, &[], &[(p, &other)]) {
                return "O7";
            }
        }
        let aromatic_c = |j: usize| self.is(j, 6, true);
        if self.has(i, &[], &[(d, &aromatic_c)]) {
            return "O8";
        }
        // Carbonyl oxygens: classify by the carbonyl carbon's other partners.
        for &(c, b) in self.mol.neighbors(i) {
            if self.mol.bond(b).order != BondOrder::Double || !self.is(c, 6, false) {
                continue;
            }
            let ch = self.h(c);
            let cx = self.x(c);
            let ali_c = |j: usize| self.is(j, 6, false);
            let n_or_o_ali = |j: usize| !self.arom(j) && matches!(self.num(j), 7 | 8);
            let oxygen_ali = |j: usize| self.is(j, 8, false);
            let ex = [i];
            if (ch == 1 && self.has(c, &ex, &[(p, &ali_c)]))
                || self.has(c, &ex, &[(p, &ali_c), (p, &al)])
                || (ch == 1 && self.has(c, &ex, &[(p, &n_or_o_ali)]))
                || ch == 2
                || (cx == 2 && self.has(c, &ex, &[(d, &oxygen_ali)]))
            {
                return "O9";
            }
            let c_any = |j: usize| self.num(j) == 6 && self.heavy(j);
            let arom_heavy = |j: usize| self.arom(j) && self.heavy(j);
            if (ch == 1 && self.has(c, &ex, &[(p, &aromatic_c)]))
                || self.has(c, &ex, &[(p, &c_any), (p, &arom_heavy)])
                || self.has(c, &ex, &[(p, &aromatic_c), (p, &al)])
            {
                return "O10";
            }
            let not_c = |j: usize| self.heavy(j) && self.num(j) != 6;
            if self.has(c, &ex, &[(p, &not_c), (p, &not_c)]) {
                return "O11";
            }
        }
        "OS"
    }

    fn sulfur(&self, i: usize) -> &'static str {
        let q = self.charge(i);
        if self.arom(i) {
            return "S3";
        }
        if q != 0 && q != 4 {
            return "S2";
        }
        let nops = |j: usize| !self.arom(j) && matches!(self.num(j), 7 | 8 | 15 | 16);
        if q == 0 && self.has(i, &[], &[(Bond::Double, &nops)]) {
            return "S2";
        }
        "S1"
    }

    fn heavy_type(&self, i: usize) -> Option<&'static str> {
        let q = self.charge(i);
        Some(match self.num(i) {
            6 => self.carbon(i),
            7 => self.nitrogen(i),
            8 => self.oxygen(i),
            9 if q == 0 => "F",
            17 if q == 0 => "Cl",
            35 if q == 0 => "Br",
            53 if q == 0 => "I",
            9 | 17 | 35 | 53 if q == -1 => "Hal",
            53 if q > 0 => "Hal",
            3 | 11 | 19 | 37 | 55 if q == 1 => "Hal",
            15 => "P",
            16 => self.sulfur(i),
            3 | 11 | 19 | 37 | 55 | 4 | 12 | 20 | 38 | 56 | 5 | 13 | 31 | 49 | 81 | 14 | 32 | 50 | 82
            | 33 | 51 | 83 | 34 | 52 | 84 => "Me1",
            21..=30 | 39..=48 | 72..=80 => "Me2",
            _ => return None,
        })
    }

    /// Type of a hydrogen bonded to `parent`. `extra_h` is the number of
    /// other hydrogens on the parent, all of which count as neighbours.
    fn hydrogen_type(&self, parent: Option<usize>, self_index: Option<usize>) -> &'static str {
        let Some(p) = parent else {
            return "HS";
        };
        let num = self.num(p);
        if num == 6 || num == 1 {
            return "H1";
        }
        let exclude: Vec<usize> = self_index.into_iter().collect();
        let other_h = self.h(p).saturating_sub(1);
        let is_o = self.is(p, 8, false);
        if is_o {
            let cx4_or_c = |j: usize| (self.is(j, 6, false) && self.x(j) == 4) || self.is(j, 6, true);
            if self.has(p, &exclude, &[(Bond::Plain, &cx4_or_c)]) {
                return "H2";
            }
            let odd = |j: usize| !matches!(self.num(j), 6 | 7 | 8 | 16);
            if other_h > 0 || self.has(p, &exclude, &[(Bond::Plain, &odd)]) {
                return "H2";
            }
        }
        if !matches!(num, 6 | 7 | 8) {
            return "H2";
        }
        if num == 7 {
            return "H3";
        }
        if is_o {
            let nitrogen = |j: usize| self.num(j) == 7;
            if self.has(p, &exclude, &[(Bond::Plain, &nitrogen)]) {
                return "H3";
            }
            for &(c, _) in self.mol.neighbors(p) {
                if Some(c) == self_index || !self.is(c, 6, false) {
                    continue;
                }
                let partner = |j: usize| {
                    matches!(self.num(j), 6 | 7) || self.is(j, 8, false) || self.is(j, 16, false)
                };
                if self.has(p, &exclude, &[(Bond::Plain, &|j| j == c)])
                    && self.has(c, &[p], &[(Bond::Double, &partner)])
                {
                    return "H4";
                }
            }
            let o_or_s = |j: usize| self.is(j, 8, false) || self.is(j, 16, false);
            if self.has(p, &exclude, &[(Bond::Plain, &o_or_s)]) {
                return "H4";
            }
        }
        "HS"
    }
}

fn assign(nbs: &[(usize, BondOrder)], wanted: &[(Bond, Pred)], used: &mut [bool]) -> bool {
    let Some(((bond, pred), rest)) = wanted.split_first() else {
        return true;
    };
    for k in 0..nbs.len() {
        if used[k] || !bond.accepts(nbs[k].1) || !pred(nbs[k].0) {
            continue;
        }
        used[k] = true;
        if assign(nbs, rest, used) {
            used[k] = false;
            return true;
        }
        used[k] = false;
    }
    false
}

/// Per-atom type assignment: `(heavy type, hydrogen type, hydrogen count)`
/// for each atom of `mol`. Hydrogen atoms present as graph vertices get
/// their own hydrogen type and no heavy type.
pub fn atom_types(mol: &Molecule) -> Result<Vec<AtomType>, DescriptorError> {
    let typer = Typer { mol };
    let mut out = Vec::with_capacity(mol.num_atoms());
    for i in 0..mol.num_atoms() {
        let atom = mol.atom(i);
        if atom.element == Element::H {
            let parent = mol.neighbors(i).first().map(|&(p, _)| p);
            out.push(AtomType {
                label: typer.hydrogen_type(parent, Some(i)),
                hydrogen_label: None,
                hydrogens: usize::from(atom.total_h()),
            });
            continue;
        }
        let label = typer.heavy_type(i).ok_or_else(|| DescriptorError::MissingContribution {
            atom: i,
            symbol: atom.element.symbol().to_string(),
            table: "crippen",
            environment: describe(mol, i),
        })?;
        let hydrogens = usize::from(atom.total_h());
        out.push(AtomType {
            label,
            hydrogen_label: (hydrogens > 0).then(|| typer.hydrogen_type(Some(i), None)),
            hydrogens,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomType {
    pub label: &'static str,
    /// Type shared by the atom's implicit hydrogens.
    pub hydrogen_label: Option<&'static str>,
    pub hydrogens: usize,
}

pub(crate) fn describe(mol: &Molecule, i: usize) -> String {
    let a = mol.atom(i);
    format!(
        "{}{} charge {} with {} heavy neighbours and {} H",
        if a.aromatic { "aromatic " } else { "" },
        a.element.symbol(),
        a.formal_charge,
        mol.heavy_degree(i),
        mol.hydrogen_count(i)
    )
}

/// Crippen log P and molar refractivity (cm³/mol).
pub fn crippen_logp_mr(mol: &Molecule) -> Result<(f64, f64), DescriptorError> {
    let mut logp = 0.0;
    let mut mr = 0.0;
    for t in atom_types(mol)? {
        let c = contribution(t.label)?;
        logp += c.logp;
        mr += c.mr;
        if let Some(hl) = t.hydrogen_label {
            let hc = contribution(hl)?;
            logp += hc.logp * t.hydrogens as f64;
            mr += hc.mr * t.hydrogens as f64;
        }
    }
    Ok((logp, mr))
}
