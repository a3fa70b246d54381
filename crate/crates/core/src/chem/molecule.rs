use serde::{Deserialize, Serialize};

use super::element::Element;

/// Marker used in stereo neighbour lists for the implicit hydrogen (or lone
/// pair) of a tetrahedral centre.
pub(crate) const IMPLICIT_NEIGHBOR: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum Chirality {
    #[default]
    None,
    /// `@@`
    Clockwise,
    /// `@`
    CounterClockwise,
}

impl Chirality {
    pub fn is_marked(self) -> bool {
        self != Chirality::None
    }

    pub(crate) fn flipped(self) -> Chirality {
        match self {
            Chirality::None => Chirality::None,
            Chirality::Clockwise => Chirality::CounterClockwise,
            Chirality::CounterClockwise => Chirality::Clockwise,
        }
    }

    pub(crate) fn flipped_if(self, flip: bool) -> Chirality {
        if flip {
            self.flipped()
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub element: Element,
    pub formal_charge: i8,
    pub explicit_h: u8,
    pub implicit_h: u8,
    pub aromatic: bool,
    /// Tetrahedral mark relative to the reference neighbour order returned by
    /// [`Molecule::stereo_reference`].
    pub chirality: Chirality,
    pub isotope: Option<u16>,
}

impl Atom {
    pub fn total_h(&self) -> u8 {
        self.explicit_h + self.implicit_h
    }

    pub fn is_heavy(&self) -> bool {
        !self.element.is_hydrogen()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to the valence sum; aromatic bonds count as one, the
    /// shared pi bond is handled by the aromatic hydrogen rule.
    pub fn valence_contribution(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

/// Double-bond configuration, expressed between the lowest-indexed
/// substituent on each end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum BondStereo {
    #[default]
    None,
    Cis,
    Trans,
}

impl BondStereo {
    fn flipped(self) -> BondStereo {
        match self {
            BondStereo::None => BondStereo::None,
            BondStereo::Cis => BondStereo::Trans,
            BondStereo::Trans => BondStereo::Cis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
    pub stereo: BondStereo,
    pub in_ring: bool,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.begin == atom || self.end == atom
    }
}

/// Attributed molecular graph.
#[derive(Debug, Clone)]
pub struct Molecule {
    pub(crate) atoms: Vec<Atom>,
    pub(crate) bonds: Vec<Bond>,
    pub(crate) rings: Vec<Vec<usize>>,
    /// `(neighbour, bond index)` per atom, ordered by neighbour index.
    pub(crate) adjacency: Vec<Vec<(usize, usize)>>,
}

impl Molecule {
    /// Builds a molecule from raw parts, deriving adjacency, SSSR rings and
    /// ring-bond flags. Callers are responsible for hydrogen counts and
    /// aromatic flags.
    pub(crate) fn from_parts(atoms: Vec<Atom>, mut bonds: Vec<Bond>) -> Molecule {
        let adjacency = build_adjacency(atoms.len(), &bonds);
        let rings = super::rings::sssr(atoms.len(), &bonds, &adjacency);
        let ring_bonds = super::rings::ring_bond_flags(&bonds, &rings);
        for (bond, flag) in bonds.iter_mut().zip(ring_bonds) {
            bond.in_ring = flag;
        }
        Molecule {
            atoms,
            bonds,
            rings,
            adjacency,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, index: usize) -> &Atom {
        &self.atoms[index]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, index: usize) -> &Bond {
        &self.bonds[index]
    }

    /// Smallest set of smallest rings, each as an atom cycle.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn net_charge(&self) -> i32 {
        self.atoms.iter().map(|a| i32::from(a.formal_charge)).sum()
    }

    /// `(neighbour, bond index)` pairs, sorted by neighbour.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn heavy_degree(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .filter(|&&(n, _)| self.atoms[n].is_heavy())
            .count()
    }

    /// Number of attached hydrogens, counting both hydrogen counts on the
    /// atom and explicit hydrogen atoms in the graph.
    pub fn hydrogen_count(&self, atom: usize) -> usize {
        usize::from(self.atoms[atom].total_h())
            + self.adjacency[atom]
                .iter()
                .filter(|&&(n, _)| self.atoms[n].element.is_hydrogen())
                .count()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|&&(n, _)| n == b)
            .map(|&(_, bond)| bond)
    }

    /// Sum of bond valence contributions around an atom.
    pub fn bond_order_sum(&self, atom: usize) -> u8 {
        self.adjacency[atom]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.valence_contribution())
            .sum()
    }

    pub fn has_bond_of_order(&self, atom: usize, order: BondOrder) -> bool {
        self.adjacency[atom]
            .iter()
            .any(|&(_, b)| self.bonds[b].order == order)
    }

    pub fn atom_in_ring(&self, atom: usize) -> bool {
        self.adjacency[atom]
            .iter()
            .any(|&(_, b)| self.bonds[b].in_ring)
    }

    /// Connected-component label per atom, numbered in order of first atom.
    pub fn components(&self) -> Vec<usize> {
        let n = self.atoms.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(a) = stack.pop() {
                for &(nb, _) in &self.adjacency[a] {
                    if label[nb] == usize::MAX {
                        label[nb] = next;
                        stack.push(nb);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Cyclomatic number `bonds - atoms + components`.
    pub fn cyclomatic_number(&self) -> usize {
        self.bonds.len() + self.num_components() - self.atoms.len()
    }

    /// Reference neighbour order for tetrahedral marks: the implicit
    /// hydrogen or lone pair first (when present), then graph neighbours by
    /// ascending index.
    pub(crate) fn stereo_reference(&self, atom: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(4);
        if has_implicit_stereo_neighbor(self.atoms[atom].total_h(), self.degree(atom)) {
            order.push(IMPLICIT_NEIGHBOR);
        }
        order.extend(self.adjacency[atom].iter().map(|&(n, _)| n));
        order
    }

    /// Lowest-indexed neighbour of `atom` other than `exclude`.
    pub(crate) fn stereo_substituent(&self, atom: usize, exclude: usize) -> Option<usize> {
        self.adjacency[atom]
            .iter()
            .map(|&(n, _)| n)
            .find(|&n| n != exclude)
    }

    /// Returns the same molecule with atoms renumbered so that new atom `i`
    /// is old atom `order[i]`. Stereo marks are re-expressed against the
    /// new reference orders, so the result denotes the same stereoisomer.
    pub fn renumbered(&self, order: &[usize]) -> Molecule {
        assert_eq!(order.len(), self.atoms.len(), "order must be a permutation");
        let mut new_index = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let atoms: Vec<Atom> = order.iter().map(|&old| self.atoms[old].clone()).collect();
        let mut bond_order: Vec<usize> = (0..self.bonds.len()).collect();
        let remap_bond = |b: &Bond| {
            let (x, y) = (new_index[b.begin], new_index[b.end]);
            (x.min(y), x.max(y))
        };
        bond_order.sort_by_key(|&i| remap_bond(&self.bonds[i]));
        let bonds: Vec<Bond> = bond_order
            .iter()
            .map(|&i| {
                let b = &self.bonds[i];
                let (x, y) = remap_bond(b);
                Bond {
                    begin: x,
                    end: y,
                    order: b.order,
                    stereo: b.stereo,
                    in_ring: b.in_ring,
                }
            })
            .collect();
        let mut out = Molecule::from_parts(atoms, bonds);

        for new in 0..out.atoms.len() {
            let old = order[new];
            let chir = self.atoms[old].chirality;
            if !chir.is_marked() {
                continue;
            }
            let old_ref: Vec<usize> = self
                .stereo_reference(old)
                .into_iter()
                .map(|n| if n == IMPLICIT_NEIGHBOR { n } else { new_index[n] })
                .collect();
            let new_ref = out.stereo_reference(new);
            out.atoms[new].chirality = chir.flipped_if(permutation_is_odd(&old_ref, &new_ref));
        }

        for (new_b, &old_b) in bond_order.iter().enumerate() {
            let ob = &self.bonds[old_b];
            if ob.stereo == BondStereo::None {
                continue;
            }
            let mut flip = false;
            for (old_end, old_other) in [(ob.begin, ob.end), (ob.end, ob.begin)] {
                let old_sub = self.stereo_substituent(old_end, old_other);
                let new_sub = out.stereo_substituent(new_index[old_end], new_index[old_other]);
                if old_sub.map(|s| new_index[s]) != new_sub {
                    flip = !flip;
                }
            }
            if flip {
                out.bonds[new_b].stereo = ob.stereo.flipped();
            }
        }
        out
    }

    /// Hydrogen-suppressed copy: explicit hydrogen atoms are folded into the
    /// hydrogen count of their heavy neighbour.
    pub fn without_explicit_hydrogens(&self) -> Molecule {
        let keep: Vec<usize> = (0..self.atoms.len())
            .filter(|&i| {
                !(self.atoms[i].element.is_hydrogen()
                    && self.atoms[i].isotope.is_none()
                    && self.atoms[i].formal_charge == 0
                    && self.degree(i) == 1
                    && self.atoms[self.adjacency[i][0].0].is_heavy())
            })
            .collect();
        if keep.len() == self.atoms.len() {
            return self.clone();
        }
        let mut new_index = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in keep.iter().enumerate() {
            new_index[old] = new;
        }
        let mut atoms: Vec<Atom> = keep.iter().map(|&i| self.atoms[i].clone()).collect();
        for i in 0..self.atoms.len() {
            if new_index[i] == usize::MAX {
                let parent = self.adjacency[i][0].0;
                atoms[new_index[parent]].explicit_h += 1;
            }
        }
        let kept_bonds: Vec<&Bond> = self
            .bonds
            .iter()
            .filter(|b| new_index[b.begin] != usize::MAX && new_index[b.end] != usize::MAX)
            .collect();
        let bonds: Vec<Bond> = kept_bonds
            .iter()
            .map(|b| Bond {
                begin: new_index[b.begin],
                end: new_index[b.end],
                ..(*b).clone()
            })
            .collect();
        let mut out = Molecule::from_parts(atoms, bonds);
        for (i, ob) in kept_bonds.iter().enumerate() {
            if ob.stereo == BondStereo::None {
                continue;
            }
            let mut stereo = ob.stereo;
            for (end, other) in [(ob.begin, ob.end), (ob.end, ob.begin)] {
                let old_sub = self.stereo_substituent(end, other);
                if old_sub.is_some_and(|s| new_index[s] == usize::MAX) {
                    match out.stereo_substituent(new_index[end], new_index[other]) {
                        Some(_) => stereo = stereo.flipped(),
                        None => stereo = BondStereo::None,
                    }
                }
            }
            out.bonds[i].stereo = stereo;
        }
        for (new, &old) in keep.iter().enumerate() {
            let chir = self.atoms[old].chirality;
            if !chir.is_marked() {
                continue;
            }
            let old_ref: Vec<usize> = self
                .stereo_reference(old)
                .into_iter()
                .map(|n| {
                    if n == IMPLICIT_NEIGHBOR || new_index[n] == usize::MAX {
                        IMPLICIT_NEIGHBOR
                    } else {
                        new_index[n]
                    }
                })
                .collect();
            let new_ref = out.stereo_reference(new);
            if old_ref.len() == new_ref.len() {
                out.atoms[new].chirality = chir.flipped_if(permutation_is_odd(&old_ref, &new_ref));
            }
        }
        out
    }
}

pub(crate) fn has_implicit_stereo_neighbor(total_h: u8, degree: usize) -> bool {
    total_h > 0 || degree == 3
}

pub(crate) fn build_adjacency(n: usize, bonds: &[Bond]) -> Vec<Vec<(usize, usize)>> {
    let mut adjacency = vec![Vec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        adjacency[b.begin].push((b.end, i));
        adjacency[b.end].push((b.begin, i));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

/// Parity of the permutation taking `from` to `to` (same elements, any order).
/// Lists of different content are treated as even.
pub(crate) fn permutation_is_odd(from: &[usize], to: &[usize]) -> bool {
    if from.len() != to.len() {
        return false;
    }
    let mut perm: Vec<usize> = Vec::with_capacity(from.len());
    for x in from {
        match to.iter().position(|y| y == x) {
            Some(p) => perm.push(p),
            None => return false,
        }
    }
    let mut odd = false;
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}
