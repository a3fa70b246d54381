//! Generated molecule collections: a combinatorial ion/solute/solvent
//! library, random valid SMILES, and a labeled synthetic dataset whose
//! target is a fixed smooth function of the pseudo-label descriptors.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chem::canonicalize;
use crate::datasets::{
    build_pseudo_labels_batch, generate_synthetic_systems, Category, DatasetError, Pools,
    Property, PseudoLabelConfig, SystemRecord, PSEUDO_LABEL_LEN,
};

const CATION_HEADS: &[&str] = &[
    "{R}n1cc[n+](C)c1",
    "{R}n1cc[n+](CC)c1",
    "{R}n1c(C)[n+](C)cc1",
    "{R}n1cc[nH+]c1",
    "{R}[n+]1ccccc1",
    "{R}[n+]1cccc(C)c1",
    "C[N+]1({R})CCCC1",
    "C[N+]1({R})CCCCC1",
    "C[N+](C)(C){R}",
    "CC[N+](CC)(CC){R}",
    "CCCC[P+](CCCC)(CCCC){R}",
    "CC[S+](CC){R}",
];

const SIDE_CHAINS: &[&str] = &[
    "C", "CC", "CCC", "CCCC", "CCCCCC", "CCCCCCCC", "CCCCCCCCCC", "C=CC", "CCO", "CCCO",
    "CCOC", "Cc1ccccc1", "CC#N", "CC(C)C",
];

const ANIONS: &[&str] = &[
    "[Cl-]",
    "[Br-]",
    "[I-]",
    "F[B-](F)(F)F",
    "FC(F)(F)S(=O)(=O)[N-]S(=O)(=O)C(F)(F)F",
    "FC(F)(F)C(F)(F)S(=O)(=O)[N-]S(=O)(=O)C(F)(F)C(F)(F)F",
    "[S-]C#N",
    "N#C[N-]C#N",
    "N#C[C-](C#N)C#N",
    "N#C[B-](C#N)(C#N)C#N",
    "CCOP(=O)([O-])OCC",
    "COP(=O)([O-])OC",
    "C[C@H](O)C(=O)[O-]",
    "[O-]C=O",
    "CC(=O)[O-]",
    "CCC(=O)[O-]",
    "CCCC(=O)[O-]",
    "CCCCCC(=O)[O-]",
    "CCCCCCCC(=O)[O-]",
    "[O-]C(=O)c1ccccc1",
    "OC(=O)C(=O)[O-]",
    "[O-]S(=O)(=O)C(F)(F)F",
    "CS(=O)(=O)[O-]",
    "CCS(=O)(=O)[O-]",
    "Cc1ccc(S(=O)(=O)[O-])cc1",
    "COS(=O)(=O)[O-]",
    "CCOS(=O)(=O)[O-]",
    "CCCCOS(=O)(=O)[O-]",
    "CCCCCCCCOS(=O)(=O)[O-]",
    "OS(=O)(=O)[O-]",
    "[O-][N+](=O)[O-]",
    "FC(F)(F)C(=O)[O-]",
    "[O-]C(=O)CN",
    "CC(N)C(=O)[O-]",
    "[O-]c1ccccc1",
    "CC(=O)[N-]S(=O)(=O)C(F)(F)F",
    "O=C1[N-]S(=O)(=O)c2ccccc21",
    "CCCCCCCCCCCC(=O)[O-]",
];

const SOLUTE_SPECIALS: &[&str] = &[
    "O=C=O", "N", "O", "S", "O=S=O", "[C-]#[O+]", "C#C", "C=C", "CC=C", "c1ccccc1", "Cc1ccccc1",
    "Cc1ccccc1C", "Cc1cccc(C)c1", "Oc1ccccc1", "Nc1ccccc1", "c1ccncc1", "c1ccsc1", "c1ccoc1",
    "ClC(Cl)Cl", "ClCCl", "ClC(Cl)(Cl)Cl", "CC(C)=O", "CCOCC", "C1CCOC1", "C1CCCCC1",
    "CS(C)=O", "CN(C)C=O", "CC(C)O", "OCCO", "CCOC(C)=O",
];

const SOLVENT_SPECIALS: &[&str] = &[
    "CCCCCCCCO", "Cc1ccccc1", "ClC(Cl)Cl", "CC(C)=O", "CCOC(C)=O", "C1CCOC1", "c1ccccc1",
    "C1CCCCC1", "CS(C)=O", "CN(C)C=O", "CC#N", "ClCCCl", "CCOCC", "OCCO", "CC(C)O",
    "C1COCCO1", "Clc1ccccc1", "CCCCCCCCCCCCCCCC",
];

fn chain(n: usize) -> String {
    "C".repeat(n)
}

/// Cations, anions, solutes and solvents used for desk-scale synthetic
/// sampling. Every entry is canonical and each list is free of duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct IonLibrary {
    pub cations: Vec<String>,
    pub anions: Vec<String>,
    pub solutes: Vec<String>,
    pub solvents: Vec<String>,
}

impl IonLibrary {
    pub fn build() -> IonLibrary {
        let cations = CATION_HEADS
            .iter()
            .flat_map(|head| SIDE_CHAINS.iter().map(move |r| head.replace("{R}", r)))
            .collect::<Vec<_>>();
        let anions: Vec<String> = ANIONS.iter().map(|s| s.to_string()).collect();

        let mut solutes: Vec<String> = SOLUTE_SPECIALS.iter().map(|s| s.to_string()).collect();
        for n in 1..=10 {
            solutes.push(chain(n));
            solutes.push(format!("{}O", chain(n)));
        }
        for n in 1..=6 {
            solutes.push(format!("{}Cl", chain(n)));
            solutes.push(format!("{}N", chain(n)));
            solutes.push(format!("{}C#N", chain(n)));
            solutes.push(format!("{}C(=O)O", chain(n)));
            solutes.push(format!("{}C=O", chain(n)));
            solutes.push(format!("c1ccccc1{}", chain(n)));
        }

        let mut solvents: Vec<String> = SOLVENT_SPECIALS.iter().map(|s| s.to_string()).collect();
        for n in 5..=12 {
            solvents.push(chain(n));
        }
        for n in 1..=8 {
            solvents.push(format!("CC(=O)O{}", chain(n)));
            solvents.push(format!("{}OC", chain(n)));
        }
        for n in 2..=6 {
            solvents.push(format!("CC(=O){}", chain(n)));
            solvents.push(format!("{}O", chain(n + 2)));
        }

        let canon = |items: Vec<String>| -> Vec<String> {
            let mut seen = BTreeSet::new();
            items
                .into_iter()
                .map(|s| canonicalize(&s).unwrap_or_else(|e| panic!("library entry '{s}': {e}")))
                .filter(|c| seen.insert(c.clone()))
                .collect()
        };
        IonLibrary {
            cations: canon(cations),
            anions: canon(anions),
            solutes: canon(solutes),
            solvents: canon(solvents),
        }
    }

    pub fn pools(&self) -> Pools {
        Pools {
            cations: self.cations.clone(),
            anions: self.anions.clone(),
            solutes: self.solutes.clone(),
            solvents: self.solvents.clone(),
        }
    }
}

#[derive(Clone, Copy)]
struct Spec {
    symbol: &'static str,
    capacity: u8,
    charge: i8,
    aromatic_ok: bool,
}

const fn spec(symbol: &'static str, capacity: u8, charge: i8) -> Spec {
    Spec {
        symbol,
        capacity,
        charge,
        aromatic_ok: false,
    }
}

const ELEMENTS: &[(Spec, u32)] = &[
    (spec("C", 4, 0), 60),
    (spec("N", 3, 0), 10),
    (spec("O", 2, 0), 10),
    (spec("S", 2, 0), 3),
    (spec("P", 3, 0), 1),
    (spec("F", 1, 0), 4),
    (spec("Cl", 1, 0), 3),
    (spec("Br", 1, 0), 2),
    (spec("N", 4, 1), 2),
    (spec("O", 1, -1), 2),
];

/// Kekulé ring templates: atoms (symbol, capacity, charge) and ring bond
/// orders starting from the bond between atom 0 and atom 1.
const RINGS: &[(&[(&str, u8, i8)], &[u8])] = &[
    (&[("C", 4, 0); 6], &[2, 1, 2, 1, 2, 1]),
    (&[("N", 3, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0)], &[2, 1, 2, 1, 2, 1]),
    (&[("S", 2, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0)], &[1, 2, 1, 2, 1]),
    (&[("O", 2, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0)], &[1, 2, 1, 2, 1]),
    (&[("N", 3, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0), ("C", 4, 0)], &[1, 2, 1, 2, 1]),
    (&[("N", 3, 0), ("C", 4, 0), ("N", 4, 1), ("C", 4, 0), ("C", 4, 0)], &[1, 2, 1, 2, 1]),
    (&[("C", 4, 0); 6], &[1; 6]),
    (&[("C", 4, 0); 5], &[1; 5]),
    (&[("C", 4, 0); 3], &[1; 3]),
    (&[("C", 4, 0), ("C", 4, 0), ("O", 2, 0), ("C", 4, 0), ("C", 4, 0), ("N", 3, 0)], &[1; 6]),
];

struct Graph {
    atoms: Vec<Spec>,
    bonds: Vec<(usize, usize, u8)>,
    used: Vec<u8>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    fn new() -> Graph {
        Graph {
            atoms: Vec::new(),
            bonds: Vec::new(),
            used: Vec::new(),
            adj: Vec::new(),
        }
    }

    fn add_atom(&mut self, s: Spec) -> usize {
        self.atoms.push(s);
        self.used.push(0);
        self.adj.push(Vec::new());
        self.atoms.len() - 1
    }

    fn free(&self, a: usize) -> u8 {
        self.atoms[a].capacity - self.used[a]
    }

    fn add_bond(&mut self, a: usize, b: usize, order: u8) {
        let k = self.bonds.len();
        self.bonds.push((a, b, order));
        self.used[a] += order;
        self.used[b] += order;
        self.adj[a].push((b, k));
        self.adj[b].push((a, k));
    }

    fn distance(&self, from: usize, to: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.atoms.len()];
        let mut queue = std::collections::VecDeque::from([from]);
        dist[from] = 0;
        while let Some(a) = queue.pop_front() {
            if a == to {
                return Some(dist[a]);
            }
            for &(nb, _) in &self.adj[a] {
                if dist[nb] == usize::MAX {
                    dist[nb] = dist[a] + 1;
                    queue.push_back(nb);
                }
            }
        }
        None
    }
}

fn pick_element(rng: &mut ChaCha8Rng) -> Spec {
    let total: u32 = ELEMENTS.iter().map(|e| e.1).sum();
    let mut x = rng.gen_range(0..total);
    for &(s, w) in ELEMENTS {
        if x < w {
            return s;
        }
        x -= w;
    }
    ELEMENTS[0].0
}

fn random_graph(rng: &mut ChaCha8Rng, heavy: usize) -> Graph {
    let mut g = Graph::new();
    if heavy >= 3 && rng.gen_bool(0.5) {
        let (atoms, orders) = RINGS[rng.gen_range(0..RINGS.len())];
        if atoms.len() <= heavy {
            let base = g.atoms.len();
            for &(symbol, capacity, charge) in atoms {
                g.add_atom(Spec {
                    symbol,
                    capacity,
                    charge,
                    aromatic_ok: true,
                });
            }
            for (k, &o) in orders.iter().enumerate() {
                g.add_bond(base + k, base + (k + 1) % atoms.len(), o);
            }
        }
    }
    if g.atoms.is_empty() {
        g.add_atom(pick_element(rng));
    }
    while g.atoms.len() < heavy {
        let open: Vec<usize> = (0..g.atoms.len()).filter(|&a| g.free(a) > 0).collect();
        if open.is_empty() {
            break;
        }
        let s = pick_element(rng);
        let parent = open[rng.gen_range(0..open.len())];
        let a = g.add_atom(s);
        g.add_bond(parent, a, 1);
    }
    let closures = rng.gen_range(0..=2);
    for _ in 0..closures {
        let open: Vec<usize> = (0..g.atoms.len()).filter(|&a| g.free(a) > 0).collect();
        if open.len() < 2 {
            break;
        }
        let a = open[rng.gen_range(0..open.len())];
        let b = open[rng.gen_range(0..open.len())];
        if a == b {
            continue;
        }
        if matches!(g.distance(a, b), Some(d) if (2..=6).contains(&d)) {
            g.add_bond(a, b, 1);
        }
    }
    for k in 0..g.bonds.len() {
        let (a, b, order) = g.bonds[k];
        let plain = |s: Spec| s.charge == 0 && !s.aromatic_ok && s.capacity >= 2;
        if order < 3
            && plain(g.atoms[a])
            && plain(g.atoms[b])
            && g.free(a) > 0
            && g.free(b) > 0
            && rng.gen_bool(0.15)
        {
            g.bonds[k].2 += 1;
            g.used[a] += 1;
            g.used[b] += 1;
        }
    }
    g
}

fn ring_label(digit: usize) -> String {
    if digit < 10 {
        digit.to_string()
    } else {
        format!("%{digit}")
    }
}

fn bond_symbol(order: u8) -> &'static str {
    match order {
        2 => "=",
        3 => "#",
        _ => "",
    }
}

/// Writes `g` as SMILES following a random traversal. Charged atoms and
/// marked stereocentres use bracket form.
fn emit(g: &Graph, rng: &mut ChaCha8Rng) -> String {
    let n = g.atoms.len();
    let mut order: Vec<Vec<(usize, usize)>> = g.adj.clone();
    for nbs in &mut order {
        nbs.shuffle(rng);
    }
    let root = rng.gen_range(0..n);

    // Spanning tree by DFS, recording visit order.
    let mut visited = vec![false; n];
    let mut tree_bond = vec![false; g.bonds.len()];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut rank = vec![0usize; n];
    let mut stack = vec![(root, usize::MAX)];
    let mut counter = 0;
    while let Some((a, via)) = stack.pop() {
        if visited[a] {
            continue;
        }
        visited[a] = true;
        rank[a] = counter;
        counter += 1;
        if via != usize::MAX {
            tree_bond[via] = true;
            let (x, y, _) = g.bonds[via];
            let parent = if x == a { y } else { x };
            children[parent].push((a, via));
        }
        for &(nb, b) in order[a].iter().rev() {
            if !visited[nb] {
                stack.push((nb, b));
            }
        }
    }

    let mut out = String::new();
    let mut digits: Vec<Option<usize>> = vec![None; g.bonds.len()];
    let mut in_use: BTreeSet<usize> = BTreeSet::new();
    let mut todo = vec![Step::Atom(root)];
    while let Some(step) = todo.pop() {
        match step {
            Step::Text(t) => out.push_str(t),
            Step::Atom(a) => {
                out.push_str(&atom_text(g, a, rng));
                let mut rings: Vec<(usize, usize)> = order[a]
                    .iter()
                    .filter(|&&(_, b)| !tree_bond[b])
                    .copied()
                    .collect();
                rings.sort_by_key(|&(nb, _)| rank[nb]);
                for (nb, b) in rings {
                    if rank[nb] < rank[a] {
                        let d = digits[b].expect("ring opened earlier");
                        out.push_str(bond_symbol(g.bonds[b].2));
                        out.push_str(&ring_label(d));
                        in_use.remove(&d);
                    } else {
                        let d = (1..).find(|d| !in_use.contains(d)).expect("free digit");
                        in_use.insert(d);
                        digits[b] = Some(d);
                        out.push_str(bond_symbol(g.bonds[b].2));
                        out.push_str(&ring_label(d));
                    }
                }
                let kids = &children[a];
                for (k, &(child, b)) in kids.iter().enumerate().rev() {
                    let last = k + 1 == kids.len();
                    if !last {
                        todo.push(Step::Text(")"));
                    }
                    todo.push(Step::Atom(child));
                    todo.push(Step::Text(bond_symbol(g.bonds[b].2)));
                    if !last {
                        todo.push(Step::Text("("));
                    }
                }
            }
        }
    }
    out
}

enum Step {
    Atom(usize),
    Text(&'static str),
}

fn atom_text(g: &Graph, a: usize, rng: &mut ChaCha8Rng) -> String {
    let s = g.atoms[a];
    let h = s.capacity - g.used[a];
    let single_only = g.adj[a].iter().all(|&(_, b)| g.bonds[b].2 == 1);
    let stereo = s.symbol == "C" && single_only && g.adj[a].len() + h as usize == 4 && g.adj[a].len() >= 3;
    if s.charge == 0 && !(stereo && rng.gen_bool(0.3)) {
        return s.symbol.to_string();
    }
    let mut t = format!("[{}", s.symbol);
    if s.charge == 0 {
        t.push_str(if rng.gen_bool(0.5) { "@" } else { "@@" });
    }
    match h {
        0 => {}
        1 => t.push('H'),
        _ => t.push_str(&format!("H{h}")),
    }
    match s.charge {
        0 => {}
        1 => t.push('+'),
        -1 => t.push('-'),
        c => t.push_str(&format!("{c:+}")),
    }
    t.push(']');
    t
}

/// `n` random SMILES strings with 1 to `max_heavy` heavy atoms each.
/// Occasionally a second small fragment is appended after a dot. The
/// strings are not canonical; all of them parse.
pub fn random_molecules(n: usize, max_heavy: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let heavy = rng.gen_range(1..=max_heavy.max(1));
        let mut text = emit(&random_graph(&mut rng, heavy), &mut rng);
        if heavy + 3 <= max_heavy && rng.gen_bool(0.1) {
            let extra = rng.gen_range(1..=3);
            text.push('.');
            text.push_str(&emit(&random_graph(&mut rng, extra), &mut rng));
        }
        if crate::chem::parse_smiles(&text).is_ok() {
            out.push(text);
        }
    }
    out
}

/// Ground-truth function used to label synthetic systems: a fixed random
/// linear map of asinh-compressed pseudo-label entries plus one nonlinear
/// interaction term.
pub fn synthetic_target(pseudo_label: &[f64]) -> f64 {
    assert_eq!(pseudo_label.len(), PSEUDO_LABEL_LEN, "pseudo-label width");
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ab_e15);
    let z: Vec<f64> = pseudo_label.iter().map(|x| x.asinh()).collect();
    let linear: f64 = z.iter().map(|v| v * rng.gen_range(-0.25..0.25)).sum();
    let interaction = (z[0] - z[21]).tanh() * z[42];
    -2.0 + 0.5 * linear + 0.3 * interaction
}

/// Synthetic systems of `category` labeled with [`synthetic_target`] for
/// `property`.
pub fn labeled_synthetic_dataset(
    pools: &Pools,
    n: usize,
    seed: u64,
    category: Category,
    property: Property,
) -> Result<Vec<SystemRecord>, DatasetError> {
    if !property.allowed_categories().contains(&category) {
        return Err(DatasetError::Invalid(format!(
            "property {property} is not defined for category {category}"
        )));
    }
    let mut records = generate_synthetic_systems(pools, n, seed, &[category])?;
    let x = build_pseudo_labels_batch(&records, &PseudoLabelConfig::default())?;
    for (r, x) in records.iter_mut().zip(&x) {
        r.property = Some(property);
        r.value = Some(synthetic_target(x));
        r.source_id = "synthetic-labeled".into();
    }
    Ok(records)
}

/// Text of the bundled labeled dataset.
pub const BUNDLED_DATASET: &str = include_str!("../data/synthetic_solvation.csv");
/// Parameters the bundled dataset was generated with.
pub const BUNDLED_DATASET_SIZE: usize = 400;
pub const BUNDLED_DATASET_SEED: u64 = 42;

/// Regenerates the records behind [`BUNDLED_DATASET`].
pub fn bundled_dataset_records() -> Result<Vec<SystemRecord>, DatasetError> {
    labeled_synthetic_dataset(
        &IonLibrary::build().pools(),
        BUNDLED_DATASET_SIZE,
        BUNDLED_DATASET_SEED,
        Category::IlSolute,
        Property::SolvationDg,
    )
}
