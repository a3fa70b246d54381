//! Average-linkage agglomerative clustering on `1 - similarity`.

use serde::{Deserialize, Serialize};

use super::FingerprintError;

/// One agglomeration step. Node ids `0..n` are leaves; merge `k` creates
/// node `n + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    /// The child containing the lower leaf index.
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
    /// Leaves in left-to-right dendrogram order.
    pub leaf_order: Vec<usize>,
}

pub(crate) fn check_similarity_matrix(matrix: &[Vec<f64>]) -> Result<(), FingerprintError> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(FingerprintError::InvalidMatrix(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(FingerprintError::InvalidMatrix(format!(
                    "entry ({i}, {j}) = {v} is outside [0, 1]"
                )));
            }
            if (v - matrix[j][i]).abs() > 1e-12 {
                return Err(FingerprintError::InvalidMatrix(format!(
                    "not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Clusters the items of a symmetric similarity matrix.
///
/// At each step the pair of clusters with the smallest average distance is
/// merged; equal distances go to the pair whose lowest leaf indices are
/// lexicographically smallest.
pub fn hierarchical_cluster(matrix: &[Vec<f64>]) -> Result<Dendrogram, FingerprintError> {
    check_similarity_matrix(matrix)?;
    let n = matrix.len();
    let mut dist: Vec<Vec<f64>> = matrix
        .iter()
        .map(|row| row.iter().map(|s| 1.0 - s).collect())
        .collect();
    // Active clusters: (node id, lowest leaf, size).
    let mut active: Vec<(usize, usize, usize)> = (0..n).map(|i| (i, i, 1)).collect();
    // Row of `dist` that holds each active cluster.
    let mut slot: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for x in 0..active.len() {
            for y in x + 1..active.len() {
                let d = dist[slot[x]][slot[y]];
                let better = match best {
                    None => true,
                    Some((bd, bx, by)) => {
                        d < bd
                            || (d == bd
                                && (active[x].1.min(active[y].1), active[x].1.max(active[y].1))
                                    < (
                                        active[bx].1.min(active[by].1),
                                        active[bx].1.max(active[by].1),
                                    ))
                    }
                };
                if better {
                    best = Some((d, x, y));
                }
            }
        }
        let (d, x, y) = best.expect("at least two clusters");
        let (a, b) = if active[x].1 < active[y].1 { (x, y) } else { (y, x) };
        let (na, nb) = (active[a].2 as f64, active[b].2 as f64);
        let (sa, sb) = (slot[a], slot[b]);
        for z in 0..active.len() {
            if z == a || z == b {
                continue;
            }
            let sz = slot[z];
            let merged = (na * dist[sa][sz] + nb * dist[sb][sz]) / (na + nb);
            dist[sa][sz] = merged;
            dist[sz][sa] = merged;
        }
        merges.push(Merge {
            left: active[a].0,
            right: active[b].0,
            distance: d,
            size: active[a].2 + active[b].2,
        });
        active[a] = (n + merges.len() - 1, active[a].1.min(active[b].1), active[a].2 + active[b].2);
        active.remove(b);
        slot.remove(b);
    }
    let leaf_order = if n == 0 { Vec::new() } else { leaves(&merges, n, active[0].0) };
    Ok(Dendrogram { merges, leaf_order })
}

fn leaves(merges: &[Merge], n: usize, root: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node < n {
            out.push(node);
        } else {
            let m = &merges[node - n];
            stack.push(m.right);
            stack.push(m.left);
        }
    }
    out
}
