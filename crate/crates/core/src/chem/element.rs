//! Periodic-table data needed by the parser, valence model and descriptors.

use std::fmt;

/// A chemical element identified by atomic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

struct ElementData {
    number: u8,
    symbol: &'static str,
    /// Conventional standard atomic weight, g/mol.
    weight: f64,
    /// Valence electrons for main-group elements, `None` for metals.
    valence_electrons: Option<u8>,
    /// Period, used to decide whether expanded valences are allowed.
    period: u8,
}

const fn el(
    number: u8,
    symbol: &'static str,
    weight: f64,
    valence_electrons: Option<u8>,
    period: u8,
) -> ElementData {
    ElementData {
        number,
        symbol,
        weight,
        valence_electrons,
        period,
    }
}

static TABLE: &[ElementData] = &[
    el(1, "H", 1.008, Some(1), 1),
    el(2, "He", 4.003, None, 1),
    el(3, "Li", 6.94, None, 2),
    el(4, "Be", 9.012, None, 2),
    el(5, "B", 10.81, Some(3), 2),
    el(6, "C", 12.011, Some(4), 2),
    el(7, "N", 14.007, Some(5), 2),
    el(8, "O", 15.999, Some(6), 2),
    el(9, "F", 18.998, Some(7), 2),
    el(10, "Ne", 20.180, None, 2),
    el(11, "Na", 22.990, None, 3),
    el(12, "Mg", 24.305, None, 3),
    el(13, "Al", 26.982, None, 3),
    el(14, "Si", 28.085, Some(4), 3),
    el(15, "P", 30.974, Some(5), 3),
    el(16, "S", 32.06, Some(6), 3),
    el(17, "Cl", 35.45, Some(7), 3),
    el(18, "Ar", 39.948, None, 3),
    el(19, "K", 39.098, None, 4),
    el(20, "Ca", 40.078, None, 4),
    el(24, "Cr", 51.996, None, 4),
    el(25, "Mn", 54.938, None, 4),
    el(26, "Fe", 55.845, None, 4),
    el(27, "Co", 58.933, None, 4),
    el(28, "Ni", 58.693, None, 4),
    el(29, "Cu", 63.546, None, 4),
    el(30, "Zn", 65.38, None, 4),
    el(31, "Ga", 69.723, None, 4),
    el(32, "Ge", 72.630, Some(4), 4),
    el(33, "As", 74.922, Some(5), 4),
    el(34, "Se", 78.971, Some(6), 4),
    el(35, "Br", 79.904, Some(7), 4),
    el(37, "Rb", 85.468, None, 5),
    el(38, "Sr", 87.62, None, 5),
    el(47, "Ag", 107.868, None, 5),
    el(50, "Sn", 118.710, Some(4), 5),
    el(51, "Sb", 121.760, Some(5), 5),
    el(52, "Te", 127.60, Some(6), 5),
    el(53, "I", 126.904, Some(7), 5),
    el(55, "Cs", 132.905, None, 6),
    el(56, "Ba", 137.327, None, 6),
];

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const SI: Element = Element(14);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_number(number: u8) -> Option<Element> {
        TABLE
            .iter()
            .any(|d| d.number == number)
            .then_some(Element(number))
    }

    /// Looks up an element by its case-sensitive symbol (`"Cl"`, not `"CL"`).
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        TABLE
            .iter()
            .find(|d| d.symbol == symbol)
            .map(|d| Element(d.number))
    }

    fn data(self) -> &'static ElementData {
        TABLE
            .iter()
            .find(|d| d.number == self.0)
            .expect("Element values are only constructed from the table")
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        self.data().symbol
    }

    pub fn atomic_weight(self) -> f64 {
        self.data().weight
    }

    pub fn is_carbon(self) -> bool {
        self == Element::C
    }

    pub fn is_hydrogen(self) -> bool {
        self == Element::H
    }

    pub fn is_halogen(self) -> bool {
        matches!(self.0, 9 | 17 | 35 | 53)
    }

    /// Members of the SMILES organic subset, which may be written without brackets.
    pub fn is_organic_subset(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Elements that may be written as lowercase aromatic symbols.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52)
    }

    /// Default valences used to derive implicit hydrogens for organic-subset atoms.
    pub fn default_valences(self) -> &'static [u8] {
        match self.0 {
            5 => &[3],
            6 => &[4],
            7 => &[3, 5],
            8 => &[2],
            15 => &[3, 5],
            16 => &[2, 4, 6],
            9 | 17 | 35 | 53 => &[1],
            _ => &[],
        }
    }

    /// Largest total valence (bond orders plus hydrogens) permitted for this
    /// element at the given formal charge, or `None` when the element is not
    /// valence-checked (metals, noble gases).
    ///
    /// Charges shift the element onto its isoelectronic neighbour: N+ behaves
    /// like C, O- like F, C- like N, B- like C. Elements from period 3 onward
    /// may expand their octet in steps of two up to their electron count.
    pub fn max_valence(self, charge: i8) -> Option<u8> {
        let data = self.data();
        let ve = i16::from(data.valence_electrons?) - i16::from(charge);
        if !(0..=8).contains(&ve) {
            return Some(0);
        }
        let base = if ve >= 4 { 8 - ve } else { ve };
        if self.0 == 1 {
            return Some(if charge == 0 { 1 } else { 0 });
        }
        if data.period >= 3 && ve >= 4 {
            let mut v = base;
            while v + 2 <= ve {
                v += 2;
            }
            Some(v as u8)
        } else {
            Some(base as u8)
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
