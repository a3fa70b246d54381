//! Pair-count Kendall tau-b and naive average-linkage clustering.

/// Tau-b from an explicit pass over all pairs.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut concordant, mut discordant, mut tie_x, mut tie_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 && dy == 0.0 {
                continue;
            } else if dx == 0.0 {
                tie_x += 1;
            } else if dy == 0.0 {
                tie_y += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let a = (concordant + discordant + tie_x) as f64;
    let b = (concordant + discordant + tie_y) as f64;
    (concordant - discordant) as f64 / (a * b).sqrt()
}

/// One merge of the naive clustering: `(left node, right node, distance, size)`.
pub type NaiveMerge = (usize, usize, f64, usize);

/// Average linkage on `1 - similarity`. Every step recomputes all cluster
/// distances from the leaf distances. Ties go to the pair whose smallest
/// leaves are lexicographically lowest; the node holding the lower leaf is
/// reported first.
pub fn average_linkage(sim: &[Vec<f64>]) -> Vec<NaiveMerge> {
    let n = sim.len();
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let (la, lb) = (&clusters[a].1, &clusters[b].1);
                let mut total = 0.0;
                for &i in la {
                    for &j in lb {
                        total += 1.0 - sim[i][j];
                    }
                }
                let d = total / (la.len() * lb.len()) as f64;
                let ma = *la.iter().min().unwrap();
                let mb = *lb.iter().min().unwrap();
                let key = (ma.min(mb), ma.max(mb));
                let better = match best {
                    None => true,
                    Some((bd, bk, _, _)) => d < bd || (d == bd && key < bk),
                };
                if better {
                    best = Some((d, key, a, b));
                }
            }
        }
        let (d, _, a, b) = best.unwrap();
        let (ida, la) = clusters[a].clone();
        let (idb, lb) = clusters[b].clone();
        let (left, right) = if la.iter().min() < lb.iter().min() { (ida, idb) } else { (idb, ida) };
        let mut leaves = la;
        leaves.extend(lb);
        merges.push((left, right, d, leaves.len()));
        clusters.remove(b);
        clusters.remove(a);
        clusters.push((n + merges.len() - 1, leaves));
    }
    merges
}
