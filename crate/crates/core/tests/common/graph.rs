//! Graph oracles: brute-force isomorphism, exhaustive cycle enumeration,
//! minimum cycle bases, all-pairs distances and simple-path counts.

use std::collections::{BTreeSet, HashSet};

use ionscreen::chem::{BondOrder, Molecule};

fn order_code(o: BondOrder) -> u8 {
    match o {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// Plain adjacency matrix of bond codes (0 = no bond).
pub fn bond_matrix(m: &Molecule) -> Vec<Vec<u8>> {
    let n = m.num_atoms();
    let mut a = vec![vec![0u8; n]; n];
    for b in m.bonds() {
        a[b.begin][b.end] = order_code(b.order);
        a[b.end][b.begin] = order_code(b.order);
    }
    a
}

fn atom_label(m: &Molecule, i: usize) -> (u8, i8, usize, bool, Option<u16>, bool, usize) {
    let a = m.atom(i);
    (
        a.element.atomic_number(),
        a.formal_charge,
        m.hydrogen_count(i),
        a.aromatic,
        a.isotope,
        a.chirality.is_marked(),
        m.degree(i),
    )
}

/// Whether the two molecules are the same labeled graph, by exhaustive
/// backtracking over atom bijections. Explicit hydrogens are folded first.
pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    let a = a.without_explicit_hydrogens();
    let b = b.without_explicit_hydrogens();
    let n = a.num_atoms();
    if n != b.num_atoms() || a.num_bonds() != b.num_bonds() {
        return false;
    }
    let la: Vec<_> = (0..n).map(|i| atom_label(&a, i)).collect();
    let lb: Vec<_> = (0..n).map(|i| atom_label(&b, i)).collect();
    let mut sa = la.clone();
    let mut sb = lb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let ma = bond_matrix(&a);
    let mb = bond_matrix(&b);
    // Visit atoms of `a` so that each one after the first of its component
    // has an already-placed neighbour.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut k = order.len();
        order.push(s);
        while k < order.len() {
            let x = order[k];
            for y in 0..n {
                if ma[x][y] != 0 && !placed[y] {
                    placed[y] = true;
                    order.push(y);
                }
            }
            k += 1;
        }
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &la, &lb, &ma, &mb, &mut image, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend<L: PartialEq>(
    depth: usize,
    order: &[usize],
    la: &[L],
    lb: &[L],
    ma: &[Vec<u8>],
    mb: &[Vec<u8>],
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..lb.len() {
        if used[y] || la[x] != lb[y] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&p| ma[x][p] == mb[y][image[p]]);
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if extend(depth + 1, order, la, lb, ma, mb, image, used) {
            return true;
        }
        used[y] = false;
        image[x] = usize::MAX;
    }
    false
}

/// Every simple cycle as a sorted edge list `(min, max)`.
pub fn simple_cycles(m: &Molecule) -> Vec<Vec<(usize, usize)>> {
    let adj = bond_matrix(m);
    let n = m.num_atoms();
    let mut found: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for start in 0..n {
        let mut path = vec![start];
        walk(start, &adj, &mut path, &mut found);
    }
    found.into_iter().collect()
}

fn walk(start: usize, adj: &[Vec<u8>], path: &mut Vec<usize>, found: &mut BTreeSet<Vec<(usize, usize)>>) {
    let last = *path.last().unwrap();
    for next in 0..adj.len() {
        if adj[last][next] == 0 {
            continue;
        }
        if next == start && path.len() >= 3 {
            let mut edges: Vec<(usize, usize)> = path
                .windows(2)
                .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
                .collect();
            edges.push((last.min(start), last.max(start)));
            edges.sort();
            found.insert(edges);
            continue;
        }
        // Only walk through vertices above the start so each cycle is
        // rooted at its smallest vertex.
        if next <= start || path.contains(&next) {
            continue;
        }
        path.push(next);
        walk(start, adj, path, found);
        path.pop();
    }
}

/// Minimum cycle basis: cycles by increasing length, kept when independent
/// of those already kept over GF(2). Returns the kept cycles' vertex sets.
pub fn minimum_cycle_basis(m: &Molecule) -> Vec<BTreeSet<usize>> {
    let edges: Vec<(usize, usize)> = m
        .bonds()
        .iter()
        .map(|b| (b.begin.min(b.end), b.begin.max(b.end)))
        .collect();
    let mut cycles = simple_cycles(m);
    cycles.sort_by_key(|c| (c.len(), c.clone()));
    // Reduced echelon rows with their pivot columns.
    let mut rows: Vec<(usize, Vec<bool>)> = Vec::new();
    let mut basis = Vec::new();
    for c in cycles {
        let mut v: Vec<bool> = edges.iter().map(|e| c.contains(e)).collect();
        for (pivot, r) in &rows {
            if v[*pivot] {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= *b;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x) {
            for (_, r) in rows.iter_mut() {
                if r[p] {
                    for (a, b) in r.iter_mut().zip(&v) {
                        *a ^= *b;
                    }
                }
            }
            rows.push((p, v));
            basis.push(c.iter().flat_map(|&(a, b)| [a, b]).collect());
        }
    }
    basis
}

/// Vertex sets of all simple cycles.
pub fn cycle_vertex_sets(m: &Molecule) -> HashSet<BTreeSet<usize>> {
    simple_cycles(m)
        .into_iter()
        .map(|c| c.iter().flat_map(|&(a, b)| [a, b]).collect())
        .collect()
}

/// Heavy-atom skeleton as a dense graph: `(adjacency matrix, element numbers)`.
pub fn skeleton(m: &Molecule) -> (Vec<Vec<u8>>, Vec<u8>) {
    let heavy: Vec<usize> = (0..m.num_atoms()).filter(|&i| m.atom(i).is_heavy()).collect();
    let full = bond_matrix(m);
    let adj = heavy
        .iter()
        .map(|&i| heavy.iter().map(|&j| full[i][j]).collect())
        .collect();
    let el = heavy.iter().map(|&i| m.atom(i).element.atomic_number()).collect();
    (adj, el)
}

/// Floyd–Warshall; `None` for disconnected pairs.
pub fn all_pairs_distances(adj: &[Vec<u8>]) -> Vec<Vec<Option<usize>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if adj[i][j] != 0 {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Number of distinct simple paths with `len` edges, found by listing
/// every vertex sequence and identifying each path with its reverse.
pub fn count_paths(adj: &[Vec<u8>], len: usize) -> usize {
    let mut paths: HashSet<Vec<usize>> = HashSet::new();
    let n = adj.len();
    fn grow(adj: &[Vec<u8>], path: &mut Vec<usize>, len: usize, out: &mut HashSet<Vec<usize>>) {
        if path.len() == len + 1 {
            let rev: Vec<usize> = path.iter().rev().copied().collect();
            out.insert(path.clone().min(rev));
            return;
        }
        let last = *path.last().unwrap();
        for y in 0..adj.len() {
            if adj[last][y] != 0 && !path.contains(&y) {
                path.push(y);
                grow(adj, path, len, out);
                path.pop();
            }
        }
    }
    for s in 0..n {
        let mut p = vec![s];
        grow(adj, &mut p, len, &mut paths);
    }
    paths.len()
}

/// Connected components by repeated relabeling.
pub fn component_labels(adj: &[Vec<u8>]) -> Vec<usize> {
    let n = adj.len();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if adj[i][j] != 0 && label[j] < label[i] {
                    label[i] = label[j];
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}
