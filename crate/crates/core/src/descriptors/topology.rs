//! Topological indices over the hydrogen-suppressed skeleton: Kier shape
//! indices, Balaban's J and Bertz's complexity index.

use std::collections::{BTreeMap, VecDeque};

use crate::chem::Molecule;

/// Heavy-atom skeleton: adjacency lists over heavy atoms, renumbered
/// densely, plus the bond orders of each edge.
pub(crate) struct Skeleton {
    pub adjacency: Vec<Vec<usize>>,
    /// `(a, b, order code)` with `a < b`.
    pub edges: Vec<(usize, usize, u8)>,
    pub elements: Vec<u8>,
}

impl Skeleton {
    pub fn new(mol: &Molecule) -> Skeleton {
        let mut index = vec![usize::MAX; mol.num_atoms()];
        let mut elements = Vec::new();
        for (i, a) in mol.atoms().iter().enumerate() {
            if a.is_heavy() {
                index[i] = elements.len();
                elements.push(a.element.atomic_number());
            }
        }
        let mut adjacency = vec![Vec::new(); elements.len()];
        let mut edges = Vec::new();
        for b in mol.bonds() {
            let (x, y) = (index[b.begin], index[b.end]);
            if x == usize::MAX || y == usize::MAX {
                continue;
            }
            adjacency[x].push(y);
            adjacency[y].push(x);
            let code = match b.order {
                crate::chem::BondOrder::Single => 1,
                crate::chem::BondOrder::Double => 2,
                crate::chem::BondOrder::Triple => 3,
                crate::chem::BondOrder::Aromatic => 4,
            };
            edges.push((x.min(y), x.max(y), code));
        }
        Skeleton {
            adjacency,
            edges,
            elements,
        }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    /// Number of simple paths with `length` edges, each counted once.
    pub fn path_count(&self, length: usize) -> usize {
        if length == 0 {
            return self.len();
        }
        let mut total = 0;
        let mut on_path = vec![false; self.len()];
        for start in 0..self.len() {
            on_path[start] = true;
            total += self.extend(start, length, &mut on_path);
            on_path[start] = false;
        }
        total / 2
    }

    fn extend(&self, at: usize, remaining: usize, on_path: &mut [bool]) -> usize {
        if remaining == 0 {
            return 1;
        }
        let mut count = 0;
        for &nb in &self.adjacency[at] {
            if on_path[nb] {
                continue;
            }
            on_path[nb] = true;
            count += self.extend(nb, remaining - 1, on_path);
            on_path[nb] = false;
        }
        count
    }

    fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(a) = queue.pop_front() {
            for &nb in &self.adjacency[a] {
                if dist[nb] == usize::MAX {
                    dist[nb] = dist[a] + 1;
                    queue.push_back(nb);
                }
            }
        }
        dist
    }
}

/// Kier's unweighted shape indices (κ1, κ2, κ3).
pub fn kappa_indices(mol: &Molecule) -> (f64, f64, f64) {
    let s = Skeleton::new(mol);
    let a = s.len() as f64;
    let ratio = |num: f64, paths: usize| {
        if paths == 0 || num <= 0.0 {
            0.0
        } else {
            num / (paths * paths) as f64
        }
    };
    let k1 = ratio(a * (a - 1.0).powi(2), s.path_count(1));
    let k2 = ratio((a - 1.0) * (a - 2.0).powi(2), s.path_count(2));
    let n3 = if s.len() % 2 == 1 {
        (a - 1.0) * (a - 3.0).powi(2)
    } else {
        (a - 3.0) * (a - 2.0).powi(2)
    };
    let k3 = ratio(n3, s.path_count(3));
    (k1, k2, k3)
}

/// Balaban's J, summed over connected components.
pub fn balaban_j(mol: &Molecule) -> f64 {
    let s = Skeleton::new(mol);
    let n = s.len();
    let mut component = vec![usize::MAX; n];
    let mut distance_sum = vec![0usize; n];
    let mut components = 0;
    for i in 0..n {
        let dist = s.distances_from(i);
        distance_sum[i] = dist.iter().filter(|&&d| d != usize::MAX).sum();
        if component[i] == usize::MAX {
            for (j, &d) in dist.iter().enumerate() {
                if d != usize::MAX {
                    component[j] = components;
                }
            }
            components += 1;
        }
    }
    let mut j_total = 0.0;
    for c in 0..components {
        let atoms = component.iter().filter(|&&x| x == c).count();
        let edges: Vec<&(usize, usize, u8)> =
            s.edges.iter().filter(|e| component[e.0] == c).collect();
        if edges.is_empty() {
            continue;
        }
        let m = edges.len() as f64;
        let mu = (edges.len() + 1 - atoms) as f64;
        let sum: f64 = edges
            .iter()
            .map(|&&(a, b, _)| 1.0 / ((distance_sum[a] * distance_sum[b]) as f64).sqrt())
            .sum();
        j_total += m / (mu + 1.0) * sum;
    }
    j_total
}

fn shannon_term(total: usize, classes: impl Iterator<Item = usize>, factor: f64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let xlog = |x: usize| {
        let x = x as f64;
        x * x.log2()
    };
    factor * xlog(total) - classes.map(xlog).sum::<f64>()
}

/// Bertz's complexity index.
///
/// Connections are pairs of skeleton bonds sharing an atom. Two
/// connections are equivalent when they have the same central element and
/// the same unordered pair of (bond order, outer element). The element term
/// runs over heavy-atom element classes:
/// `CT = 2η·log2 η − Σ ηᵢ·log2 ηᵢ + N·log2 N − Σ Nⱼ·log2 Nⱼ`.
pub fn bertz_ct(mol: &Molecule) -> f64 {
    let s = Skeleton::new(mol);
    let mut bond_code = BTreeMap::new();
    for &(a, b, code) in &s.edges {
        bond_code.insert((a, b), code);
    }
    let code = |a: usize, b: usize| bond_code[&(a.min(b), a.max(b))];
    let mut connection_classes: BTreeMap<(u8, (u8, u8), (u8, u8)), usize> = BTreeMap::new();
    let mut eta = 0;
    for center in 0..s.len() {
        let nbs = &s.adjacency[center];
        for x in 0..nbs.len() {
            for y in x + 1..nbs.len() {
                let p = (code(center, nbs[x]), s.elements[nbs[x]]);
                let q = (code(center, nbs[y]), s.elements[nbs[y]]);
                let key = (s.elements[center], p.min(q), p.max(q));
                *connection_classes.entry(key).or_default() += 1;
                eta += 1;
            }
        }
    }
    let mut element_classes: BTreeMap<u8, usize> = BTreeMap::new();
    for &e in &s.elements {
        *element_classes.entry(e).or_default() += 1;
    }
    shannon_term(eta, connection_classes.into_values(), 2.0)
        + shannon_term(s.len(), element_classes.into_values(), 1.0)
}
