//! SMILES writer. Given a total priority over atoms, emits a depth-first
//! SMILES; the canonical form is the lexicographically smallest emission
//! over the canonical orderings found by [`super::canon`].

use std::collections::{BTreeMap, VecDeque};

use super::canon;
use super::molecule::{
    has_implicit_stereo_neighbor, permutation_is_odd, BondOrder, BondStereo, Chirality, Molecule,
    IMPLICIT_NEIGHBOR,
};
use super::parser::organic_implicit_h;

/// Canonical SMILES for `mol`.
pub fn write_smiles(mol: &Molecule) -> String {
    canon::canonical_smiles(mol).0
}

/// SMILES following an arbitrary atom priority (lower value is visited
/// first). Useful for producing alternative encodings of one molecule.
///
/// # Panics
/// If `priority` does not hold one entry per atom.
pub fn write_smiles_in_order(mol: &Molecule, priority: &[usize]) -> String {
    assert_eq!(priority.len(), mol.num_atoms());
    emit(mol, priority).0
}

struct Plan {
    /// Tree children per atom, in visiting order.
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    /// Ring bonds opened at an atom: `(partner, bond)` in visiting order.
    ring_open: Vec<Vec<(usize, usize)>>,
    /// Ring bonds closed at an atom.
    ring_close: Vec<Vec<(usize, usize)>>,
    roots: Vec<usize>,
    /// Atoms in the order they are written.
    visit: Vec<usize>,
}

fn plan(mol: &Molecule, rank: &[usize]) -> Plan {
    let n = mol.num_atoms();
    let mut p = Plan {
        children: vec![Vec::new(); n],
        parent: vec![None; n],
        ring_open: vec![Vec::new(); n],
        ring_close: vec![Vec::new(); n],
        roots: Vec::new(),
        visit: Vec::new(),
    };
    let mut visited = vec![false; n];
    let mut bond_used = vec![false; mol.num_bonds()];
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&a| rank[a]);
    for start in starts {
        if visited[start] {
            continue;
        }
        p.roots.push(start);
        dfs(mol, rank, start, &mut visited, &mut bond_used, &mut p);
    }
    p
}

fn sorted_neighbors(mol: &Molecule, rank: &[usize], atom: usize) -> Vec<(usize, usize)> {
    let mut nbs: Vec<(usize, usize)> = mol.neighbors(atom).to_vec();
    nbs.sort_by_key(|&(nb, _)| rank[nb]);
    nbs
}

fn dfs(
    mol: &Molecule,
    rank: &[usize],
    atom: usize,
    visited: &mut [bool],
    bond_used: &mut [bool],
    p: &mut Plan,
) {
    visited[atom] = true;
    p.visit.push(atom);
    // Ring closures to atoms already on the path are recorded first so the
    // opening side knows about them before its own children are planned.
    for (nb, bi) in sorted_neighbors(mol, rank, atom) {
        if bond_used[bi] {
            continue;
        }
        if visited[nb] {
            bond_used[bi] = true;
            p.ring_open[nb].push((atom, bi));
            p.ring_close[atom].push((nb, bi));
        }
    }
    for (nb, bi) in sorted_neighbors(mol, rank, atom) {
        if bond_used[bi] {
            continue;
        }
        if visited[nb] {
            bond_used[bi] = true;
            p.ring_open[nb].push((atom, bi));
            p.ring_close[atom].push((nb, bi));
            continue;
        }
        bond_used[bi] = true;
        p.parent[nb] = Some(atom);
        p.children[atom].push(nb);
        dfs(mol, rank, nb, visited, bond_used, p);
    }
}

/// Direction variable (+1 = written `/`) for single bonds that carry
/// double-bond geometry. Keys are bond indices.
fn assign_directions(mol: &Molecule, p: &Plan) -> BTreeMap<usize, i8> {
    let stereo_bonds: Vec<usize> = (0..mol.num_bonds())
        .filter(|&b| mol.bond(b).stereo != BondStereo::None && mol.bond(b).order == BondOrder::Double)
        .collect();
    if stereo_bonds.is_empty() {
        return BTreeMap::new();
    }
    let n = mol.num_atoms();
    let mut position = vec![0usize; n];
    for (i, &a) in p.visit.iter().enumerate() {
        position[a] = i;
    }
    // Written direction of each bond: (from, to).
    let written_from = |bi: usize| -> usize {
        let b = mol.bond(bi);
        if p.parent[b.end] == Some(b.begin) {
            b.begin
        } else if p.parent[b.begin] == Some(b.end) {
            b.end
        } else if position[b.begin] < position[b.end] {
            b.begin
        } else {
            b.end
        }
    };
    // side(s rel a) = sign * y(edge)
    let side_sign = |a: usize, bi: usize| -> i8 {
        if written_from(bi) == a {
            1
        } else {
            -1
        }
    };

    // Constraint graph over edges: y(e1) * y(e2) = c.
    let mut constraints: BTreeMap<usize, Vec<(usize, i8)>> = BTreeMap::new();
    let mut add = |e1: usize, e2: usize, c: i8| {
        constraints.entry(e1).or_default().push((e2, c));
        constraints.entry(e2).or_default().push((e1, c));
    };
    let marked_single = |bi: usize| matches!(mol.bond(bi).order, BondOrder::Single | BondOrder::Aromatic);
    for &db in &stereo_bonds {
        let bond = mol.bond(db);
        let mut ref_edges = Vec::new();
        for (end, other) in [(bond.begin, bond.end), (bond.end, bond.begin)] {
            let Some(reference) = mol.stereo_substituent(end, other) else {
                break;
            };
            let ref_bond = mol.bond_between(end, reference).unwrap();
            if !marked_single(ref_bond) {
                break;
            }
            ref_edges.push((end, ref_bond));
            for &(nb, bi) in mol.neighbors(end) {
                if nb == other || nb == reference || !marked_single(bi) {
                    continue;
                }
                // side(o) = -side(ref)
                let c = -(side_sign(end, bi) * side_sign(end, ref_bond));
                add(ref_bond, bi, c);
            }
        }
        if ref_edges.len() == 2 {
            let (a, ea) = ref_edges[0];
            let (b, eb) = ref_edges[1];
            let relation: i8 = if bond.stereo == BondStereo::Cis { 1 } else { -1 };
            add(ea, eb, relation * side_sign(a, ea) * side_sign(b, eb));
        }
    }

    let mut edges: Vec<usize> = constraints.keys().copied().collect();
    edges.sort_by_key(|&bi| {
        let b = mol.bond(bi);
        (position[b.begin].max(position[b.end]), position[b.begin].min(position[b.end]))
    });
    let mut value: BTreeMap<usize, i8> = BTreeMap::new();
    let mut conflicts = false;
    for e in edges {
        if value.contains_key(&e) {
            continue;
        }
        value.insert(e, 1);
        let mut queue = VecDeque::from([e]);
        while let Some(x) = queue.pop_front() {
            let vx = value[&x];
            for &(y, c) in &constraints[&x] {
                let want = vx * c;
                match value.get(&y) {
                    Some(&vy) if vy != want => conflicts = true,
                    Some(_) => {}
                    None => {
                        value.insert(y, want);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    if conflicts {
        log::debug!("inconsistent double-bond directions; geometry marks dropped");
        return BTreeMap::new();
    }
    value
}

struct Emitter<'a> {
    mol: &'a Molecule,
    plan: Plan,
    directions: BTreeMap<usize, i8>,
    digits_in_use: Vec<bool>,
    ring_digit: BTreeMap<usize, usize>,
    out: String,
    order: Vec<usize>,
}

pub(crate) fn emit(mol: &Molecule, rank: &[usize]) -> (String, Vec<usize>) {
    let plan = plan(mol, rank);
    let directions = assign_directions(mol, &plan);
    let roots = plan.roots.clone();
    let mut e = Emitter {
        mol,
        plan,
        directions,
        digits_in_use: vec![false; 100],
        ring_digit: BTreeMap::new(),
        out: String::new(),
        order: Vec::with_capacity(mol.num_atoms()),
    };
    for (i, root) in roots.into_iter().enumerate() {
        if i > 0 {
            e.out.push('.');
        }
        e.atom(root, None);
    }
    (e.out, e.order)
}

impl Emitter<'_> {
    fn bond_symbol(&self, bi: usize, from: usize) -> &'static str {
        let b = self.mol.bond(bi);
        // `from` is always the atom the bond is written from.
        let _ = from;
        if let Some(&y) = self.directions.get(&bi) {
            return if y > 0 { "/" } else { "\\" };
        }
        match b.order {
            BondOrder::Single => {
                if self.mol.atom(b.begin).aromatic && self.mol.atom(b.end).aromatic {
                    "-"
                } else {
                    ""
                }
            }
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
            BondOrder::Aromatic => {
                if self.mol.atom(b.begin).aromatic && self.mol.atom(b.end).aromatic {
                    ""
                } else {
                    ":"
                }
            }
        }
    }

    fn atom(&mut self, atom: usize, parent_bond: Option<usize>) {
        let mol = self.mol;
        if let Some(bi) = parent_bond {
            let parent = mol.bond(bi).other(atom);
            let sym = self.bond_symbol(bi, parent);
            self.out.push_str(sym);
        }
        self.order.push(atom);

        // Neighbour order as written, for the tetrahedral mark.
        let mut written: Vec<usize> = Vec::new();
        if let Some(p) = self.plan.parent[atom] {
            written.push(p);
        }
        if has_implicit_stereo_neighbor(mol.atom(atom).total_h(), mol.degree(atom)) {
            written.push(IMPLICIT_NEIGHBOR);
        }

        let closes = self.plan.ring_close[atom].clone();
        let opens = self.plan.ring_open[atom].clone();
        let mut ring_text = String::new();
        let mut to_free = Vec::new();
        let mut closes_sorted: Vec<(usize, usize, usize)> = closes
            .iter()
            .map(|&(partner, bi)| (self.ring_digit[&bi], partner, bi))
            .collect();
        closes_sorted.sort_unstable();
        for (digit, partner, _) in &closes_sorted {
            ring_text.push_str(&digit_text(*digit));
            written.push(*partner);
            to_free.push(*digit);
        }
        for &(partner, bi) in &opens {
            let digit = (1..100)
                .find(|&d| !self.digits_in_use[d])
                .expect("fewer than 100 open rings");
            self.digits_in_use[digit] = true;
            self.ring_digit.insert(bi, digit);
            ring_text.push_str(self.bond_symbol(bi, atom));
            ring_text.push_str(&digit_text(digit));
            written.push(partner);
        }
        for d in to_free {
            self.digits_in_use[d] = false;
        }
        let children = self.plan.children[atom].clone();
        written.extend(children.iter().copied());

        self.out.push_str(&atom_token(mol, atom, &written));
        self.out.push_str(&ring_text);
        let last = children.len().saturating_sub(1);
        for (i, &child) in children.iter().enumerate() {
            let bi = mol.bond_between(atom, child).unwrap();
            if i < last {
                self.out.push('(');
                self.atom(child, Some(bi));
                self.out.push(')');
            } else {
                self.atom(child, Some(bi));
            }
        }
    }
}

fn digit_text(d: usize) -> String {
    if d < 10 {
        d.to_string()
    } else {
        format!("%{d}")
    }
}

fn atom_token(mol: &Molecule, atom: usize, written: &[usize]) -> String {
    let a = mol.atom(atom);
    let chirality = if a.chirality.is_marked() {
        let reference = mol.stereo_reference(atom);
        a.chirality.flipped_if(permutation_is_odd(&reference, written))
    } else {
        Chirality::None
    };
    let symbol = if a.aromatic {
        a.element.symbol().to_ascii_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    let has_multiple = mol
        .neighbors(atom)
        .iter()
        .any(|&(_, b)| matches!(mol.bond(b).order, BondOrder::Double | BondOrder::Triple));
    let implied = if a.element.is_organic_subset() {
        organic_implicit_h(a.element, a.aromatic, mol.bond_order_sum(atom), has_multiple)
    } else {
        None
    };
    let plain = a.formal_charge == 0
        && a.isotope.is_none()
        && chirality == Chirality::None
        && implied == Some(a.total_h());
    if plain {
        return symbol;
    }
    let mut t = String::from("[");
    if let Some(iso) = a.isotope {
        t.push_str(&iso.to_string());
    }
    t.push_str(&symbol);
    match chirality {
        Chirality::CounterClockwise => t.push('@'),
        Chirality::Clockwise => t.push_str("@@"),
        Chirality::None => {}
    }
    match a.total_h() {
        0 => {}
        1 => t.push('H'),
        h => t.push_str(&format!("H{h}")),
    }
    match a.formal_charge {
        0 => {}
        1 => t.push('+'),
        -1 => t.push('-'),
        q if q > 0 => t.push_str(&format!("+{q}")),
        q => t.push_str(&format!("-{}", -q)),
    }
    t.push(']');
    t
}
