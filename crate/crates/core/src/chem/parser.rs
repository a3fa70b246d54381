//! SMILES reader.
//!
//! Supported: organic-subset and bracket atoms (isotope, chirality `@`/`@@`,
//! hydrogen count, charge, atom class), bonds `- = # : / \`, branches,
//! ring closures `0-9` and `%nn`, and `.` fragment separators.

use std::collections::BTreeMap;
use std::fmt;

use super::aromaticity;
use super::element::Element;
use super::molecule::{
    has_implicit_stereo_neighbor, permutation_is_odd, Atom, Bond, BondOrder, BondStereo,
    Chirality, Molecule, IMPLICIT_NEIGHBOR,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    Syntax(String),
    UnclosedRing(u32),
    UnclosedBranch,
    Valence { atom: usize, symbol: String },
    UnsupportedToken(String),
    Kekulization(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input where the problem was detected.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty SMILES"),
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at {}: {msg}", self.position),
            ParseErrorKind::UnclosedRing(d) => {
                write!(f, "unclosed ring bond {d} opened at {}", self.position)
            }
            ParseErrorKind::UnclosedBranch => {
                write!(f, "unclosed branch opened at {}", self.position)
            }
            ParseErrorKind::Valence { atom, symbol } => write!(
                f,
                "valence violation on atom {atom} ({symbol}) at {}",
                self.position
            ),
            ParseErrorKind::UnsupportedToken(t) => {
                write!(f, "unsupported token '{t}' at {}", self.position)
            }
            ParseErrorKind::Kekulization(msg) => write!(f, "cannot kekulize: {msg}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(kind: ParseErrorKind, position: usize) -> Result<T, ParseError> {
    Err(ParseError { kind, position })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSymbol {
    Single,
    Double,
    Triple,
    Aromatic,
    Up,
    Down,
}

impl BondSymbol {
    fn from_char(c: u8) -> Option<BondSymbol> {
        Some(match c {
            b'-' => BondSymbol::Single,
            b'=' => BondSymbol::Double,
            b'#' => BondSymbol::Triple,
            b':' => BondSymbol::Aromatic,
            b'/' => BondSymbol::Up,
            b'\\' => BondSymbol::Down,
            _ => return None,
        })
    }
}

struct ParsedAtom {
    atom: Atom,
    bracket: bool,
    position: usize,
}

struct RingOpening {
    atom: usize,
    symbol: Option<BondSymbol>,
    slot: usize,
    position: usize,
}

/// Directional single-bond mark, as written from `from` to `to`.
struct Direction {
    from: usize,
    to: usize,
    up: bool,
}

struct Builder {
    atoms: Vec<ParsedAtom>,
    bonds: Vec<Bond>,
    /// Neighbours in written order, with `IMPLICIT_NEIGHBOR` for bracket H.
    written: Vec<Vec<usize>>,
    directions: Vec<Direction>,
}

impl Builder {
    fn add_bond(
        &mut self,
        a: usize,
        b: usize,
        symbol: Option<BondSymbol>,
        position: usize,
    ) -> Result<(), ParseError> {
        if a == b {
            return err(ParseErrorKind::Syntax("atom bonded to itself".into()), position);
        }
        if self.bonds.iter().any(|x| x.contains(a) && x.contains(b)) {
            return err(
                ParseErrorKind::Syntax("duplicate bond between the same atoms".into()),
                position,
            );
        }
        let order = match symbol {
            None => {
                if self.atoms[a].atom.aromatic && self.atoms[b].atom.aromatic {
                    BondOrder::Aromatic
                } else {
                    BondOrder::Single
                }
            }
            Some(BondSymbol::Single) | Some(BondSymbol::Up) | Some(BondSymbol::Down) => {
                BondOrder::Single
            }
            Some(BondSymbol::Double) => BondOrder::Double,
            Some(BondSymbol::Triple) => BondOrder::Triple,
            Some(BondSymbol::Aromatic) => BondOrder::Aromatic,
        };
        if let Some(s @ (BondSymbol::Up | BondSymbol::Down)) = symbol {
            self.directions.push(Direction {
                from: a,
                to: b,
                up: s == BondSymbol::Up,
            });
        }
        self.bonds.push(Bond {
            begin: a,
            end: b,
            order,
            stereo: BondStereo::None,
            in_ring: false,
        });
        Ok(())
    }
}

/// Parses a SMILES string into a hydrogen-suppressed molecule with implicit
/// hydrogens, rings, aromaticity and stereo marks assigned. Atom order
/// follows the input.
pub fn parse_smiles(text: &str) -> Result<Molecule, ParseError> {
    let bytes = text.trim().as_bytes();
    if bytes.is_empty() {
        return err(ParseErrorKind::Empty, 0);
    }
    let mut b = Builder {
        atoms: Vec::new(),
        bonds: Vec::new(),
        written: Vec::new(),
        directions: Vec::new(),
    };
    let mut prev: Option<usize> = None;
    let mut pending: Option<(BondSymbol, usize)> = None;
    let mut branches: Vec<(Option<usize>, usize)> = Vec::new();
    let mut rings: BTreeMap<u32, RingOpening> = BTreeMap::new();
    let mut i = 0;

    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if let Some(sym) = BondSymbol::from_char(c) {
            if pending.is_some() {
                return err(ParseErrorKind::Syntax("two consecutive bond symbols".into()), i);
            }
            if prev.is_none() {
                return err(ParseErrorKind::Syntax("bond symbol without a preceding atom".into()), i);
            }
            pending = Some((sym, i));
            i += 1;
            continue;
        }
        match c {
            b'(' => {
                if prev.is_none() {
                    return err(ParseErrorKind::Syntax("branch without a preceding atom".into()), i);
                }
                if pending.is_some() {
                    return err(ParseErrorKind::Syntax("bond symbol before branch".into()), i);
                }
                branches.push((prev, i));
                i += 1;
            }
            b')' => {
                if pending.is_some() {
                    return err(ParseErrorKind::Syntax("bond symbol before ')'".into()), i);
                }
                let Some((p, _)) = branches.pop() else {
                    return err(ParseErrorKind::Syntax("unmatched ')'".into()), i);
                };
                if i > 0 && bytes[i - 1] == b'(' {
                    return err(ParseErrorKind::Syntax("empty branch".into()), i);
                }
                prev = p;
                i += 1;
            }
            b'.' => {
                if pending.is_some() {
                    return err(ParseErrorKind::Syntax("bond symbol before '.'".into()), i);
                }
                prev = None;
                i += 1;
            }
            b'0'..=b'9' | b'%' => {
                let Some(atom) = prev else {
                    return err(ParseErrorKind::Syntax("ring bond without an atom".into()), i);
                };
                let digit = if c == b'%' {
                    if i + 2 >= bytes.len() {
                        return err(ParseErrorKind::Syntax("'%' needs two digits".into()), i);
                    }
                    let d1 = bytes[i + 1];
                    let d2 = bytes[i + 2];
                    if !d1.is_ascii_digit() || !d2.is_ascii_digit() {
                        return err(ParseErrorKind::Syntax("'%' needs two digits".into()), i);
                    }
                    i += 3;
                    u32::from(d1 - b'0') * 10 + u32::from(d2 - b'0')
                } else {
                    i += 1;
                    u32::from(c - b'0')
                };
                let symbol = pending.take().map(|(s, _)| s);
                if let Some(open) = rings.remove(&digit) {
                    let sym = match (open.symbol, symbol) {
                        (Some(x), Some(y)) if x != y => {
                            if matches!(x, BondSymbol::Up | BondSymbol::Down)
                                && matches!(y, BondSymbol::Up | BondSymbol::Down)
                            {
                                Some(x)
                            } else {
                                return err(
                                    ParseErrorKind::Syntax("conflicting ring-bond symbols".into()),
                                    start,
                                );
                            }
                        }
                        (Some(x), _) => Some(x),
                        (None, y) => y,
                    };
                    let (from, to) = if open.symbol.is_some() {
                        (open.atom, atom)
                    } else {
                        (atom, open.atom)
                    };
                    b.add_bond(from, to, sym, start)?;
                    b.written[open.atom][open.slot] = atom;
                    b.written[atom].push(open.atom);
                } else {
                    let slot = b.written[atom].len();
                    b.written[atom].push(usize::MAX - 1);
                    rings.insert(
                        digit,
                        RingOpening {
                            atom,
                            symbol,
                            slot,
                            position: start,
                        },
                    );
                }
            }
            b'[' => {
                let end = match bytes[i..].iter().position(|&x| x == b']') {
                    Some(off) => i + off,
                    None => return err(ParseErrorKind::Syntax("unterminated bracket atom".into()), i),
                };
                let (atom, h) = parse_bracket(&bytes[i + 1..end], i + 1)?;
                let idx = push_atom(&mut b, atom, true, start, prev, pending.take())?;
                if h > 0 {
                    b.written[idx].push(IMPLICIT_NEIGHBOR);
                }
                prev = Some(idx);
                i = end + 1;
            }
            _ => {
                let (element, aromatic, len) = organic_atom(&bytes[i..], i)?;
                let atom = Atom {
                    element,
                    formal_charge: 0,
                    explicit_h: 0,
                    implicit_h: 0,
                    aromatic,
                    chirality: Chirality::None,
                    isotope: None,
                };
                let idx = push_atom(&mut b, atom, false, start, prev, pending.take())?;
                prev = Some(idx);
                i += len;
            }
        }
    }

    if let Some((_, pos)) = pending {
        return err(ParseErrorKind::Syntax("dangling bond symbol".into()), pos);
    }
    if let Some((_, pos)) = branches.pop() {
        return err(ParseErrorKind::UnclosedBranch, pos);
    }
    if let Some((&digit, open)) = rings.iter().next() {
        return err(ParseErrorKind::UnclosedRing(digit), open.position);
    }

    finish(b)
}

fn push_atom(
    b: &mut Builder,
    atom: Atom,
    bracket: bool,
    position: usize,
    prev: Option<usize>,
    pending: Option<(BondSymbol, usize)>,
) -> Result<usize, ParseError> {
    let idx = b.atoms.len();
    b.atoms.push(ParsedAtom {
        atom,
        bracket,
        position,
    });
    b.written.push(Vec::new());
    if let Some(p) = prev {
        b.add_bond(p, idx, pending.map(|(s, _)| s), position)?;
        b.written[p].push(idx);
        b.written[idx].push(p);
    }
    Ok(idx)
}

fn organic_atom(rest: &[u8], pos: usize) -> Result<(Element, bool, usize), ParseError> {
    let two = if rest.len() >= 2 { &rest[..2] } else { &rest[..1] };
    if two == b"Cl" {
        return Ok((Element::CL, false, 2));
    }
    if two == b"Br" {
        return Ok((Element::BR, false, 2));
    }
    let (el, aromatic) = match rest[0] {
        b'B' => (Element::B, false),
        b'C' => (Element::C, false),
        b'N' => (Element::N, false),
        b'O' => (Element::O, false),
        b'P' => (Element::P, false),
        b'S' => (Element::S, false),
        b'F' => (Element::F, false),
        b'I' => (Element::I, false),
        b'b' => (Element::B, true),
        b'c' => (Element::C, true),
        b'n' => (Element::N, true),
        b'o' => (Element::O, true),
        b'p' => (Element::P, true),
        b's' => (Element::S, true),
        other => {
            let token = (other as char).to_string();
            return err(ParseErrorKind::UnsupportedToken(token), pos);
        }
    };
    Ok((el, aromatic, 1))
}

/// Parses the inside of `[...]`; returns the atom and its hydrogen count.
fn parse_bracket(s: &[u8], offset: usize) -> Result<(Atom, u8), ParseError> {
    let mut i = 0;
    let syntax = |msg: &str, at: usize| -> Result<(Atom, u8), ParseError> {
        err(ParseErrorKind::Syntax(msg.into()), offset + at)
    };
    let mut isotope = None;
    let mut n = 0u32;
    let mut has_digits = false;
    while i < s.len() && s[i].is_ascii_digit() {
        n = n * 10 + u32::from(s[i] - b'0');
        has_digits = true;
        i += 1;
    }
    if has_digits {
        isotope = Some(n as u16);
    }
    if i >= s.len() {
        return syntax("missing element symbol", i);
    }
    let (element, aromatic, len) = bracket_symbol(&s[i..]).ok_or_else(|| ParseError {
        kind: ParseErrorKind::UnsupportedToken(
            String::from_utf8_lossy(&s[i..(i + 2).min(s.len())]).into_owned(),
        ),
        position: offset + i,
    })?;
    i += len;

    let mut chirality = Chirality::None;
    if i < s.len() && s[i] == b'@' {
        if i + 1 < s.len() && s[i + 1] == b'@' {
            chirality = Chirality::Clockwise;
            i += 2;
        } else {
            chirality = Chirality::CounterClockwise;
            i += 1;
        }
        if i < s.len() && s[i].is_ascii_uppercase() && s[i] != b'H' {
            return err(
                ParseErrorKind::UnsupportedToken("non-tetrahedral chirality class".into()),
                offset + i,
            );
        }
    }

    let mut h = 0u8;
    if i < s.len() && s[i] == b'H' {
        i += 1;
        h = 1;
        if i < s.len() && s[i].is_ascii_digit() {
            h = s[i] - b'0';
            i += 1;
        }
    }

    let mut charge: i32 = 0;
    if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
        let sign = if s[i] == b'+' { 1 } else { -1 };
        let ch = s[i];
        i += 1;
        if i < s.len() && s[i].is_ascii_digit() {
            let mut mag = 0i32;
            while i < s.len() && s[i].is_ascii_digit() {
                mag = mag * 10 + i32::from(s[i] - b'0');
                i += 1;
            }
            charge = sign * mag;
        } else {
            let mut mag = 1;
            while i < s.len() && s[i] == ch {
                mag += 1;
                i += 1;
            }
            charge = sign * mag;
        }
    }
    if !(-8..=8).contains(&charge) {
        return syntax("charge out of range", i);
    }

    if i < s.len() && s[i] == b':' {
        i += 1;
        let digits_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return syntax("atom class needs digits", i);
        }
    }
    if i != s.len() {
        return syntax("unexpected character in bracket atom", i);
    }

    Ok((
        Atom {
            element,
            formal_charge: charge as i8,
            explicit_h: h,
            implicit_h: 0,
            aromatic,
            chirality,
            isotope,
        },
        h,
    ))
}

fn bracket_symbol(s: &[u8]) -> Option<(Element, bool, usize)> {
    // Aromatic two-letter symbols first.
    for (sym, el) in [("se", 34u8), ("as", 33), ("te", 52)] {
        if s.starts_with(sym.as_bytes()) {
            return Some((Element::from_number(el)?, true, 2));
        }
    }
    if s[0].is_ascii_lowercase() {
        let el = match s[0] {
            b'b' => Element::B,
            b'c' => Element::C,
            b'n' => Element::N,
            b'o' => Element::O,
            b'p' => Element::P,
            b's' => Element::S,
            _ => return None,
        };
        return Some((el, true, 1));
    }
    if s.len() >= 2 && s[1].is_ascii_lowercase() {
        let sym = std::str::from_utf8(&s[..2]).ok()?;
        if let Some(el) = Element::from_symbol(sym) {
            return Some((el, false, 2));
        }
    }
    let sym = std::str::from_utf8(&s[..1]).ok()?;
    Element::from_symbol(sym).map(|el| (el, false, 1))
}

/// Hydrogens an unbracketed atom would carry given its bonds, following the
/// organic-subset valence rules. `None` signals a valence violation.
pub(crate) fn organic_implicit_h(
    element: Element,
    aromatic: bool,
    bond_sum: u8,
    has_multiple_bond: bool,
) -> Option<u8> {
    let valences = element.default_valences();
    if valences.is_empty() {
        return None;
    }
    if aromatic {
        let v0 = valences[0];
        let pi = if has_multiple_bond { 0 } else { 1 };
        if bond_sum > element.max_valence(0).unwrap_or(v0) {
            return None;
        }
        return Some(v0.saturating_sub(bond_sum + pi));
    }
    valences
        .iter()
        .find(|&&v| v >= bond_sum)
        .map(|&v| v - bond_sum)
}

fn finish(mut b: Builder) -> Result<Molecule, ParseError> {
    let n = b.atoms.len();
    let adjacency = super::molecule::build_adjacency(n, &b.bonds);

    for idx in 0..n {
        let bond_sum: u8 = adjacency[idx]
            .iter()
            .map(|&(_, bi)| b.bonds[bi].order.valence_contribution())
            .sum();
        let pa = &b.atoms[idx];
        let atom = &pa.atom;
        let valence_error = || {
            err(
                ParseErrorKind::Valence {
                    atom: idx,
                    symbol: atom.element.symbol().to_string(),
                },
                pa.position,
            )
        };
        if pa.bracket {
            if let Some(max) = atom.element.max_valence(atom.formal_charge) {
                if bond_sum + atom.explicit_h > max {
                    return valence_error();
                }
            }
        } else {
            let has_multiple = adjacency[idx].iter().any(|&(_, bi)| {
                matches!(b.bonds[bi].order, BondOrder::Double | BondOrder::Triple)
            });
            match organic_implicit_h(atom.element, atom.aromatic, bond_sum, has_multiple) {
                Some(h) => b.atoms[idx].atom.implicit_h = h,
                None => return valence_error(),
            }
        }
    }

    // Express tetrahedral marks against the reference neighbour order.
    for idx in 0..n {
        let chir = b.atoms[idx].atom.chirality;
        if !chir.is_marked() {
            continue;
        }
        let mut written = b.written[idx].clone();
        let total_h = b.atoms[idx].atom.total_h();
        let degree = adjacency[idx].len();
        if total_h == 0 && has_implicit_stereo_neighbor(total_h, degree) {
            // Lone pair sits where an implicit hydrogen would be written.
            let at = usize::from(written.first().is_some_and(|&f| {
                b.atoms[idx].position > b.atoms.get(f).map_or(usize::MAX, |p| p.position)
            }));
            written.insert(at.min(written.len()), IMPLICIT_NEIGHBOR);
        }
        let mut reference = Vec::new();
        if has_implicit_stereo_neighbor(total_h, degree) {
            reference.push(IMPLICIT_NEIGHBOR);
        }
        reference.extend(adjacency[idx].iter().map(|&(nb, _)| nb));
        if written.len() != reference.len() {
            b.atoms[idx].atom.chirality = Chirality::None;
            continue;
        }
        b.atoms[idx].atom.chirality = chir.flipped_if(permutation_is_odd(&written, &reference));
    }

    let atoms: Vec<Atom> = b.atoms.iter().map(|p| p.atom.clone()).collect();
    let mut mol = Molecule::from_parts(atoms, b.bonds);
    aromaticity::perceive(&mut mol).map_err(|msg| ParseError {
        kind: ParseErrorKind::Kekulization(msg),
        position: 0,
    })?;
    assign_double_bond_stereo(&mut mol, &b.directions);
    Ok(mol.without_explicit_hydrogens())
}

/// Resolves `/` and `\` marks into cis/trans labels on double bonds.
fn assign_double_bond_stereo(mol: &mut Molecule, directions: &[Direction]) {
    if directions.is_empty() {
        return;
    }
    // side(s rel a) = +1 when substituent s lies "above" double-bond atom a.
    let side = |s: usize, a: usize| -> Option<i8> {
        directions.iter().find_map(|d| {
            if d.from == s && d.to == a {
                Some(if d.up { -1 } else { 1 })
            } else if d.from == a && d.to == s {
                Some(if d.up { 1 } else { -1 })
            } else {
                None
            }
        })
    };
    let end_side = |mol: &Molecule, a: usize, other: usize| -> Option<i8> {
        let reference = mol.stereo_substituent(a, other)?;
        if let Some(s) = side(reference, a) {
            return Some(s);
        }
        mol.neighbors(a)
            .iter()
            .map(|&(n, _)| n)
            .filter(|&n| n != other && n != reference)
            .find_map(|n| side(n, a).map(|s| -s))
    };
    for bi in 0..mol.bonds.len() {
        if mol.bonds[bi].order != BondOrder::Double {
            continue;
        }
        let (a, c) = (mol.bonds[bi].begin, mol.bonds[bi].end);
        if let (Some(sa), Some(sc)) = (end_side(mol, a, c), end_side(mol, c, a)) {
            mol.bonds[bi].stereo = if sa == sc {
                BondStereo::Cis
            } else {
                BondStereo::Trans
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_counts(s: &str) -> Vec<u8> {
        parse_smiles(s)
            .unwrap()
            .atoms()
            .iter()
            .map(Atom::total_h)
            .collect()
    }

    #[test]
    fn ethanol() {
        let m = parse_smiles("CCO").unwrap();
        assert_eq!(m.num_atoms(), 3);
        assert_eq!(m.num_bonds(), 2);
        assert!(m.bonds().iter().all(|b| b.order == BondOrder::Single));
        assert_eq!(h_counts("CCO"), vec![3, 2, 1]);
    }

    #[test]
    fn benzene() {
        let m = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(m.num_atoms(), 6);
        assert!(m.atoms().iter().all(|a| a.aromatic && a.total_h() == 1));
        assert!(m.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
        assert_eq!(m.rings().len(), 1);
    }

    #[test]
    fn kekule_benzene_becomes_aromatic() {
        let m = parse_smiles("C1=CC=CC=C1").unwrap();
        assert!(m.atoms().iter().all(|a| a.aromatic));
        assert!(m.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
    }

    #[test]
    fn unclosed_branch() {
        let e = parse_smiles("CC(C").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnclosedBranch);
        assert_eq!(e.position, 2);
    }

    #[test]
    fn unclosed_ring() {
        let e = parse_smiles("C1CC").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnclosedRing(1));
    }

    #[test]
    fn syntax_errors_report_positions() {
        assert_eq!(parse_smiles("CC)").unwrap_err().position, 2);
        assert!(matches!(
            parse_smiles("C==C").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(
            parse_smiles("C[C").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(parse_smiles("").unwrap_err().kind, ParseErrorKind::Empty));
    }

    #[test]
    fn unsupported_tokens() {
        assert!(matches!(
            parse_smiles("C*C").unwrap_err().kind,
            ParseErrorKind::UnsupportedToken(_)
        ));
        assert!(matches!(
            parse_smiles("[Xx]").unwrap_err().kind,
            ParseErrorKind::UnsupportedToken(_)
        ));
    }

    #[test]
    fn valence_violations() {
        assert!(matches!(
            parse_smiles("C(C)(C)(C)(C)C").unwrap_err().kind,
            ParseErrorKind::Valence { .. }
        ));
        assert!(matches!(
            parse_smiles("[OH3]").unwrap_err().kind,
            ParseErrorKind::Valence { .. }
        ));
        // Charged nitrogen may carry four bonds.
        assert!(parse_smiles("C[N+](C)(C)C").is_ok());
        assert!(parse_smiles("CC(=O)[O-]").is_ok());
    }

    #[test]
    fn bracket_atoms() {
        let m = parse_smiles("[13CH3][NH3+]").unwrap();
        assert_eq!(m.atom(0).isotope, Some(13));
        assert_eq!(m.atom(0).total_h(), 3);
        assert_eq!(m.atom(1).formal_charge, 1);
        assert_eq!(m.net_charge(), 1);
        assert_eq!(parse_smiles("[Fe+++]").unwrap().atom(0).formal_charge, 3);
        assert_eq!(parse_smiles("[O-2]").unwrap().atom(0).formal_charge, -2);
    }

    #[test]
    fn ring_closure_percent_and_fragments() {
        let m = parse_smiles("C%12CCCCC%12.O").unwrap();
        assert_eq!(m.rings().len(), 1);
        assert_eq!(m.num_components(), 2);
    }

    #[test]
    fn implicit_hydrogens_for_hypervalent_and_halogens() {
        assert_eq!(h_counts("CS(=O)(=O)C"), vec![3, 0, 0, 0, 3]);
        assert_eq!(h_counts("P"), vec![3]);
        assert_eq!(h_counts("FC(Cl)Br"), vec![0, 1, 0, 0]);
        assert_eq!(h_counts("c1cc[nH]c1"), vec![1, 1, 1, 1, 1]);
        assert_eq!(h_counts("B"), vec![3]);
    }

    #[test]
    fn explicit_hydrogen_atoms_are_folded() {
        let m = parse_smiles("[H]C([H])([H])[H]").unwrap();
        assert_eq!(m.num_atoms(), 1);
        assert_eq!(m.atom(0).total_h(), 4);
        // Molecular hydrogen keeps its atoms.
        assert_eq!(parse_smiles("[H][H]").unwrap().num_atoms(), 2);
    }

    #[test]
    fn double_bond_stereo() {
        let trans = parse_smiles("C/C=C/C").unwrap();
        assert_eq!(trans.bond(1).stereo, BondStereo::Trans);
        let cis = parse_smiles("C/C=C\\C").unwrap();
        assert_eq!(cis.bond(1).stereo, BondStereo::Cis);
        let also_trans = parse_smiles("C\\C=C\\C").unwrap();
        assert_eq!(also_trans.bond(1).stereo, BondStereo::Trans);
        let none = parse_smiles("CC=CC").unwrap();
        assert_eq!(none.bond(1).stereo, BondStereo::None);
    }

    #[test]
    fn tetrahedral_marks_normalize() {
        // Stored marks refer to [H, neighbours by index]; writing the
        // hydrogen second is one transposition away from that order.
        let a = parse_smiles("N[C@@H](C)O").unwrap();
        assert_eq!(a.atom(1).chirality, Chirality::CounterClockwise);
        let b = parse_smiles("[C@@H](N)(C)O").unwrap();
        assert_eq!(b.atom(0).chirality, Chirality::Clockwise);
        let c = parse_smiles("N[C@H](C)O").unwrap();
        assert_ne!(a.atom(1).chirality, c.atom(1).chirality);
    }
}
