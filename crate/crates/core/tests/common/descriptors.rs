//! Brute-force descriptor oracle, coded from the original definitions.

use std::collections::{BTreeMap, HashMap};

use ionscreen::chem::{BondOrder, Molecule};

use super::graph::{all_pairs_distances, component_labels, count_paths, minimum_cycle_basis, skeleton};
use super::smarts::{crippen_table, CrippenTyper, HGraph};

fn weight(z: u8) -> f64 {
    match z {
        1 => 1.008,
        5 => 10.81,
        6 => 12.011,
        7 => 14.007,
        8 => 15.999,
        9 => 18.998,
        14 => 28.085,
        15 => 30.974,
        16 => 32.06,
        17 => 35.45,
        35 => 79.904,
        53 => 126.904,
        _ => panic!("no weight for element {z}"),
    }
}

/// Fragment notation of an N or O environment as written in the polar
/// surface table, e.g. `[NH](-*)-*` or `[n+](-*)(:*):*`.
fn tpsa_notation(m: &Molecule, i: usize, three_ring: bool) -> String {
    let a = m.atom(i);
    let mut sym = a.element.symbol().to_string();
    if a.aromatic {
        sym = sym.to_lowercase();
    }
    let h = m.hydrogen_count(i);
    let hs = match h {
        0 => String::new(),
        1 => "H".into(),
        k => format!("H{k}"),
    };
    let q = match a.formal_charge {
        0 => "",
        1 => "+",
        -1 => "-",
        _ => "?",
    };
    let mut bonds: Vec<char> = m
        .neighbors(i)
        .iter()
        .filter(|&&(n, _)| m.atom(n).is_heavy())
        .map(|&(_, b)| match m.bond(b).order {
            BondOrder::Single => '-',
            BondOrder::Double => '=',
            BondOrder::Triple => '#',
            BondOrder::Aromatic => ':',
        })
        .collect();
    let rank = |c: &char| "-=#:".find(*c).unwrap();
    bonds.sort_by_key(rank);
    let head = format!("[{sym}{hs}{q}]");
    if three_ring {
        // Two single ring bonds close the ring; any remaining bond is a branch.
        let mut rest = bonds.clone();
        for _ in 0..2 {
            let k = rest.iter().position(|&c| c == '-').unwrap();
            rest.remove(k);
        }
        let branches: String = rest.iter().map(|c| format!("({c}*)")).collect();
        return format!("{head}1{branches}-*-*-1");
    }
    let Some((last, first)) = bonds.split_last() else {
        return head;
    };
    let branches: String = first.iter().map(|c| format!("({c}*)")).collect();
    format!("{head}{branches}{last}*")
}

pub struct TpsaTable {
    /// notation -> (value, ring flag)
    rows: HashMap<String, (f64, String)>,
}

impl Default for TpsaTable {
    fn default() -> Self {
        let rows = include_str!("../../data/tpsa.tsv")
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .map(|l| {
                let f: Vec<&str> = l.split('\t').collect();
                (f[10].to_string(), (f[9].parse().unwrap(), f[8].to_string()))
            })
            .collect();
        TpsaTable { rows }
    }
}

impl TpsaTable {
    pub fn contribution(&self, m: &Molecule, i: usize, rings: &[Vec<usize>]) -> f64 {
        let z = m.atom(i).element.atomic_number();
        if z != 7 && z != 8 {
            return 0.0;
        }
        let in3 = rings.iter().any(|r| r.len() == 3 && r.contains(&i));
        if in3 {
            if let Some((v, _)) = self.rows.get(&tpsa_notation(m, i, true)) {
                return *v;
            }
        }
        if let Some((v, flag)) = self.rows.get(&tpsa_notation(m, i, false)) {
            if flag == "*" || (flag == "0" && !in3) {
                return *v;
            }
        }
        let d = m.heavy_degree(i) as f64;
        let h = m.hydrogen_count(i) as f64;
        let (base, per) = if z == 7 { (30.5, 8.2) } else { (28.5, 8.6) };
        (base - per * d + 1.5 * h).max(0.0)
    }
}

fn xlog2(x: usize) -> f64 {
    if x == 0 {
        0.0
    } else {
        x as f64 * (x as f64).log2()
    }
}

pub fn kappa(adj: &[Vec<u8>]) -> [f64; 3] {
    let a = adj.len() as f64;
    let p: Vec<f64> = (1..=3).map(|l| count_paths(adj, l) as f64).collect();
    let k = |num: f64, p: f64| if p == 0.0 || num <= 0.0 { 0.0 } else { num / (p * p) };
    let k3num = if adj.len() % 2 == 1 {
        (a - 1.0) * (a - 3.0) * (a - 3.0)
    } else {
        (a - 3.0) * (a - 2.0) * (a - 2.0)
    };
    [
        k(a * (a - 1.0) * (a - 1.0), p[0]),
        k((a - 1.0) * (a - 2.0) * (a - 2.0), p[1]),
        k(k3num, p[2]),
    ]
}

pub fn balaban(adj: &[Vec<u8>]) -> f64 {
    let n = adj.len();
    let d = all_pairs_distances(adj);
    let row: Vec<usize> = (0..n).map(|i| d[i].iter().flatten().sum()).collect();
    let comp = component_labels(adj);
    let mut total = 0.0;
    let labels: std::collections::BTreeSet<usize> = comp.iter().copied().collect();
    for c in labels {
        let atoms = comp.iter().filter(|&&x| x == c).count();
        let mut m = 0usize;
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[i][j] != 0 && comp[i] == c {
                    m += 1;
                    s += 1.0 / ((row[i] * row[j]) as f64).sqrt();
                }
            }
        }
        if m == 0 {
            continue;
        }
        let mu = (m + 1 - atoms) as f64;
        total += m as f64 / (mu + 1.0) * s;
    }
    total
}

pub fn bertz(adj: &[Vec<u8>], el: &[u8]) -> f64 {
    let n = adj.len();
    // A connection is an unordered pair of bonds meeting at an atom,
    // classified by the central element and the two (order, outer element)
    // ends.
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    let mut eta = 0;
    for c in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if adj[c][x] == 0 || adj[c][y] == 0 {
                    continue;
                }
                let mut ends = [format!("{}-{}", adj[c][x], el[x]), format!("{}-{}", adj[c][y], el[y])];
                ends.sort();
                *classes.entry(format!("{}|{}|{}", el[c], ends[0], ends[1])).or_default() += 1;
                eta += 1;
            }
        }
    }
    let mut elements: BTreeMap<u8, usize> = BTreeMap::new();
    for &e in el {
        *elements.entry(e).or_default() += 1;
    }
    let conn = 2.0 * xlog2(eta) - classes.values().map(|&k| xlog2(k)).sum::<f64>();
    let elem = xlog2(n) - elements.values().map(|&k| xlog2(k)).sum::<f64>();
    conn + elem
}

pub struct Oracle {
    typer: CrippenTyper,
    crippen: HashMap<String, (f64, f64)>,
    tpsa: TpsaTable,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            typer: CrippenTyper::default(),
            crippen: crippen_table(),
            tpsa: TpsaTable::default(),
        }
    }
}

impl Oracle {
    /// Crippen `(logp, mr)` as a sum over every vertex of the hydrogen-complete graph.
    pub fn crippen(&self, m: &Molecule) -> (f64, f64) {
        let g = HGraph::new(m);
        let mut logp = 0.0;
        let mut mr = 0.0;
        for (v, t) in self.typer.types(&g).into_iter().enumerate() {
            let t = t.unwrap_or_else(|| panic!("vertex {v} has no Crippen type"));
            let (l, r) = self.crippen[t];
            logp += l;
            mr += r;
        }
        (logp, mr)
    }

    pub fn crippen_types(&self, m: &Molecule) -> (HGraph, Vec<Option<&'static str>>) {
        let g = HGraph::new(m);
        let t = self.typer.types(&g);
        (g, t)
    }

    /// All 21 descriptors in the library's column order.
    pub fn vector(&self, m: &Molecule) -> [f64; 21] {
        let n = m.num_atoms();
        let heavy: Vec<usize> = (0..n).filter(|&i| m.atom(i).is_heavy()).collect();
        let z = |i: usize| m.atom(i).element.atomic_number();
        let rings: Vec<Vec<usize>> = minimum_cycle_basis(m)
            .into_iter()
            .map(|r| r.into_iter().collect())
            .collect();
        let in_ring_bond = |a: usize, b: usize| {
            rings.iter().any(|r| r.contains(&a) && r.contains(&b)) && {
                // A bond is in a ring when removing it keeps its ends connected.
                let mut adj = super::graph::bond_matrix(m);
                adj[a][b] = 0;
                adj[b][a] = 0;
                let comp = component_labels(&adj);
                comp[a] == comp[b]
            }
        };

        let no = |i: &usize| matches!(z(*i), 7 | 8);
        let hba = heavy.iter().filter(|i| no(i)).count();
        let hbd = heavy.iter().filter(|i| no(i) && m.hydrogen_count(**i) > 0).count();

        let mut rot = 0;
        for b in m.bonds() {
            let (x, y) = (b.begin, b.end);
            if b.order != BondOrder::Single || z(x) == 1 || z(y) == 1 {
                continue;
            }
            if m.heavy_degree(x) < 2 || m.heavy_degree(y) < 2 || in_ring_bond(x, y) {
                continue;
            }
            let carbonyl = |c: usize| {
                z(c) == 6
                    && m.neighbors(c)
                        .iter()
                        .any(|&(o, bb)| z(o) == 8 && m.bond(bb).order == BondOrder::Double)
            };
            let amide = (z(x) == 7 && carbonyl(y)) || (z(y) == 7 && carbonyl(x));
            if !amide {
                rot += 1;
            }
        }

        let tpsa: f64 = (0..n).map(|i| self.tpsa.contribution(m, i, &rings)).sum();
        let stereo = (0..n).filter(|&i| m.atom(i).chirality.is_marked()).count();
        let (logp, mr) = self.crippen(m);

        let carbons: Vec<usize> = (0..n).filter(|&i| z(i) == 6).collect();
        let sp3 = carbons
            .iter()
            .filter(|&&i| {
                !m.atom(i).aromatic && m.neighbors(i).iter().all(|&(_, b)| m.bond(b).order == BondOrder::Single)
            })
            .count();
        let frac = if carbons.is_empty() { 0.0 } else { sp3 as f64 / carbons.len() as f64 };

        let full = super::graph::bond_matrix(m);
        let comps = component_labels(&full);
        let ncomp = comps.iter().collect::<std::collections::HashSet<_>>().len();
        let ring_count = m.num_bonds() + ncomp - n;

        let hetero_ring = |r: &Vec<usize>| r.iter().any(|&a| z(a) != 6);
        let arom_ring = |r: &Vec<usize>| r.iter().all(|&a| m.atom(a).aromatic);
        let heterocycles = rings.iter().filter(|r| hetero_ring(r)).count();
        let aromatic = rings.iter().filter(|r| arom_ring(r)).count();
        let arom_het = rings.iter().filter(|r| hetero_ring(r) && arom_ring(r)).count();
        let spiro = (0..n)
            .filter(|&a| {
                let mine: Vec<&Vec<usize>> = rings.iter().filter(|r| r.contains(&a)).collect();
                mine.iter().enumerate().any(|(i, r1)| {
                    mine[i + 1..]
                        .iter()
                        .any(|r2| r1.iter().filter(|x| r2.contains(x)).count() == 1)
                })
            })
            .count();

        let mw: f64 = (0..n)
            .map(|i| weight(z(i)) + m.atom(i).total_h() as f64 * weight(1))
            .sum();
        let heteroatoms = heavy.iter().filter(|&&i| z(i) != 6).count();

        let (adj, el) = skeleton(m);
        let k = kappa(&adj);
        [
            hbd as f64,
            hba as f64,
            rot as f64,
            tpsa,
            stereo as f64,
            logp,
            mr,
            frac,
            ring_count as f64,
            heterocycles as f64,
            aromatic as f64,
            arom_het as f64,
            spiro as f64,
            mw,
            heteroatoms as f64,
            heavy.len() as f64,
            k[0],
            k[1],
            k[2],
            balaban(&adj),
            bertz(&adj, &el),
        ]
    }
}
