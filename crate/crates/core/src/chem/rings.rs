//! Ring perception.
//!
//! The SSSR is a minimum cycle basis built from Horton's candidate set
//! (one cycle per vertex and non-tree edge of its BFS tree), sorted by size
//! and filtered for linear independence over GF(2).

use std::collections::{BTreeSet, VecDeque};

use super::molecule::{Bond, Molecule};

/// Smallest set of smallest rings of `mol`.
pub fn perceive_rings(mol: &Molecule) -> Vec<Vec<usize>> {
    mol.rings.clone()
}

pub(crate) fn sssr(n: usize, bonds: &[Bond], adjacency: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let target = cyclomatic(n, bonds.len(), adjacency);
    if target == 0 {
        return Vec::new();
    }

    let mut candidates: BTreeSet<(usize, Vec<usize>, Vec<usize>)> = BTreeSet::new();
    for root in 0..n {
        let (parent, parent_bond, depth) = bfs_tree(root, adjacency);
        for (bi, b) in bonds.iter().enumerate() {
            let (x, y) = (b.begin, b.end);
            if depth[x] == usize::MAX || depth[y] == usize::MAX {
                continue;
            }
            if parent_bond[x] == Some(bi) || parent_bond[y] == Some(bi) {
                continue;
            }
            let px = path_to_root(x, &parent);
            let py = path_to_root(y, &parent);
            // Paths must meet only at the root.
            let sx: BTreeSet<usize> = px.iter().copied().collect();
            if py.iter().filter(|a| sx.contains(a)).count() != 1 {
                continue;
            }
            let mut cycle: Vec<usize> = px.clone();
            cycle.extend(py[1..].iter().rev());
            let mut edge_set: Vec<usize> = cycle_bonds(&cycle, adjacency);
            edge_set.sort_unstable();
            let normalized = normalize_cycle(&cycle);
            candidates.insert((cycle.len(), edge_set, normalized));
        }
    }

    let mut basis: Vec<Vec<u64>> = Vec::new();
    let words = bonds.len().div_ceil(64);
    let mut rings = Vec::new();
    for (_, edges, atoms) in candidates {
        let mut v = vec![0u64; words];
        for e in &edges {
            v[e / 64] |= 1 << (e % 64);
        }
        if insert_independent(&mut basis, v) {
            rings.push(atoms);
            if rings.len() == target {
                break;
            }
        }
    }
    rings
}

fn cyclomatic(n: usize, m: usize, adjacency: &[Vec<(usize, usize)>]) -> usize {
    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(a) = stack.pop() {
            for &(nb, _) in &adjacency[a] {
                if !seen[nb] {
                    seen[nb] = true;
                    stack.push(nb);
                }
            }
        }
    }
    m + components - n
}

type BfsTree = (Vec<usize>, Vec<Option<usize>>, Vec<usize>);

fn bfs_tree(root: usize, adjacency: &[Vec<(usize, usize)>]) -> BfsTree {
    let n = adjacency.len();
    let mut parent = vec![usize::MAX; n];
    let mut parent_bond = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        for &(nb, bi) in &adjacency[a] {
            if depth[nb] == usize::MAX {
                depth[nb] = depth[a] + 1;
                parent[nb] = a;
                parent_bond[nb] = Some(bi);
                queue.push_back(nb);
            }
        }
    }
    (parent, parent_bond, depth)
}

/// Root-first path from the BFS root to `x`.
fn path_to_root(x: usize, parent: &[usize]) -> Vec<usize> {
    let mut path = vec![x];
    let mut cur = x;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn cycle_bonds(cycle: &[usize], adjacency: &[Vec<(usize, usize)>]) -> Vec<usize> {
    (0..cycle.len())
        .map(|i| {
            let a = cycle[i];
            let b = cycle[(i + 1) % cycle.len()];
            adjacency[a]
                .iter()
                .find(|&&(n, _)| n == b)
                .map(|&(_, bi)| bi)
                .expect("consecutive cycle atoms are bonded")
        })
        .collect()
}

/// Rotates a cycle to start at its smallest atom and picks the direction
/// with the smaller second element.
pub(crate) fn normalize_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let start = (0..n).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let forward: Vec<usize> = (0..n).map(|k| cycle[(start + k) % n]).collect();
    let backward: Vec<usize> = (0..n).map(|k| cycle[(start + n - k) % n]).collect();
    if forward <= backward {
        forward
    } else {
        backward
    }
}

/// Gaussian elimination over GF(2); keeps `basis` in reduced form keyed by
/// leading bit. Returns whether `v` was independent.
fn insert_independent(basis: &mut Vec<Vec<u64>>, mut v: Vec<u64>) -> bool {
    for row in basis.iter() {
        let lead = leading_bit(row).expect("basis rows are nonzero");
        if v[lead / 64] >> (lead % 64) & 1 == 1 {
            for (a, b) in v.iter_mut().zip(row) {
                *a ^= b;
            }
        }
    }
    if leading_bit(&v).is_none() {
        return false;
    }
    let lead = leading_bit(&v).unwrap();
    for row in basis.iter_mut() {
        if row[lead / 64] >> (lead % 64) & 1 == 1 {
            for (a, b) in row.iter_mut().zip(&v) {
                *a ^= b;
            }
        }
    }
    basis.push(v);
    true
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// A bond is in a ring iff it lies on some basis cycle.
pub(crate) fn ring_bond_flags(bonds: &[Bond], rings: &[Vec<usize>]) -> Vec<bool> {
    let mut flags = vec![false; bonds.len()];
    for ring in rings {
        for i in 0..ring.len() {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            if let Some(idx) = bonds.iter().position(|bd| bd.contains(a) && bd.contains(b)) {
                flags[idx] = true;
            }
        }
    }
    flags
}

/// Every simple cycle of length `min_len..=max_len`, normalized and sorted.
/// Independent of atom numbering up to relabeling.
pub fn all_simple_cycles(mol: &Molecule, min_len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let n = mol.num_atoms();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for start in 0..n {
        if !mol.atom_in_ring(start) {
            continue;
        }
        path.clear();
        path.push(start);
        on_path[start] = true;
        extend_cycles(mol, start, &mut path, &mut on_path, min_len, max_len, &mut found);
        on_path[start] = false;
    }
    found.into_iter().collect()
}

fn extend_cycles(
    mol: &Molecule,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    min_len: usize,
    max_len: usize,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &(nb, bi) in mol.neighbors(last) {
        if !mol.bonds[bi].in_ring {
            continue;
        }
        if nb == start && path.len() >= min_len.max(3) {
            found.insert(normalize_cycle(path));
            continue;
        }
        // Only extend through atoms larger than the start so each cycle is
        // enumerated from its smallest member.
        if nb <= start || on_path[nb] || path.len() >= max_len {
            continue;
        }
        path.push(nb);
        on_path[nb] = true;
        extend_cycles(mol, start, path, on_path, min_len, max_len, found);
        on_path[nb] = false;
        path.pop();
    }
}
