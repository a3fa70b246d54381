//! A small SMARTS interpreter (atom primitives, logical operators,
//! recursive environments, branches) and the Wildman–Crippen pattern list
//! expressed with it. Matching runs on a graph with every hydrogen made
//! explicit, as in the original method.

use ionscreen::chem::{BondOrder, Molecule};

#[derive(Debug, Clone)]
enum Prim {
    Any,
    Aliphatic,
    Aromatic,
    Number(u8),
    Element { number: u8, aromatic: bool },
    HCount(usize),
    Connectivity(usize),
    Charge(i8),
    Recursive(Box<Pattern>),
}

#[derive(Debug, Clone)]
enum Expr {
    Prim(Prim),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, Copy)]
enum BondQuery {
    SingleOrAromatic,
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
}

#[derive(Debug, Clone)]
pub struct Pattern {
    atoms: Vec<Expr>,
    /// `(parent, bond)` for every atom after the first.
    links: Vec<Option<(usize, BondQuery)>>,
}

fn symbol_number(s: &str) -> Option<u8> {
    Some(match s {
        "H" => 1,
        "B" => 5,
        "C" => 6,
        "N" => 7,
        "O" => 8,
        "F" => 9,
        "Si" => 14,
        "P" => 15,
        "S" => 16,
        "Cl" => 17,
        "Br" => 35,
        "I" => 53,
        _ => return None,
    })
}

struct Reader<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        self.pos += 1;
        c
    }
    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }
}

/// Parses a bracket-atom body such as `CH2X4` or `N;+,+2` into an expression.
fn parse_bracket(body: &str) -> Expr {
    Expr::And(split_top(body, b';').iter().map(|p| parse_or(p)).collect())
}

fn parse_or(s: &str) -> Expr {
    // `,` inside a recursive `$()` must not split, so split at depth zero.
    Expr::Or(split_top(s, b',').into_iter().map(|p| parse_and(&p)).collect())
}

fn split_top(s: &str, sep: u8) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.bytes() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c as char);
        }
    }
    out.push(cur);
    out
}

fn parse_and(s: &str) -> Expr {
    Expr::And(split_top(s, b'&').into_iter().map(|p| parse_implicit_and(&p)).collect())
}

/// A run of primitives with optional `!` prefixes and no explicit operator.
fn parse_implicit_and(s: &str) -> Expr {
    let mut r = Reader { s: s.as_bytes(), pos: 0 };
    let mut parts = Vec::new();
    let mut negate = false;
    let mut first = true;
    while let Some(c) = r.peek() {
        if c == b'!' {
            r.bump();
            negate = !negate;
            continue;
        }
        let prim = match c {
            b'*' => {
                r.bump();
                Prim::Any
            }
            b'#' => {
                r.bump();
                Prim::Number(r.number().unwrap() as u8)
            }
            b'$' => {
                r.bump();
                assert_eq!(r.bump(), Some(b'('));
                let start = r.pos;
                let mut depth = 1;
                while depth > 0 {
                    match r.bump().unwrap() {
                        b'(' => depth += 1,
                        b')' => depth -= 1,
                        _ => {}
                    }
                }
                Prim::Recursive(Box::new(parse_pattern(&s[start..r.pos - 1])))
            }
            b'+' | b'-' => {
                r.bump();
                let sign: i8 = if c == b'+' { 1 } else { -1 };
                let mut count = 1;
                while r.peek() == Some(c) {
                    r.bump();
                    count += 1;
                }
                let magnitude = r.number().map_or(count, |n| n as i8);
                Prim::Charge(sign * magnitude)
            }
            b'H' if !first => {
                r.bump();
                Prim::HCount(r.number().unwrap_or(1))
            }
            b'X' => {
                r.bump();
                Prim::Connectivity(r.number().unwrap_or(1))
            }
            b'A' => {
                r.bump();
                Prim::Aliphatic
            }
            b'a' => {
                r.bump();
                Prim::Aromatic
            }
            b'c' | b'n' | b'o' | b's' | b'p' | b'b' => {
                r.bump();
                let upper = (c as char).to_ascii_uppercase().to_string();
                Prim::Element {
                    number: symbol_number(&upper).unwrap(),
                    aromatic: true,
                }
            }
            b'A'..=b'Z' => {
                r.bump();
                let mut sym = (c as char).to_string();
                if let Some(n) = r.peek() {
                    let two = format!("{sym}{}", n as char);
                    if n.is_ascii_lowercase() && symbol_number(&two).is_some() {
                        r.bump();
                        sym = two;
                    }
                }
                Prim::Element {
                    number: symbol_number(&sym).unwrap_or_else(|| panic!("symbol {sym}")),
                    aromatic: false,
                }
            }
            _ => panic!("unsupported SMARTS text '{s}'"),
        };
        first = false;
        let e = Expr::Prim(prim);
        parts.push(if negate { Expr::Not(Box::new(e)) } else { e });
        negate = false;
    }
    Expr::And(parts)
}

/// Parses a tree-shaped SMARTS pattern (no ring closures).
pub fn parse_pattern(text: &str) -> Pattern {
    let mut p = Pattern {
        atoms: Vec::new(),
        links: Vec::new(),
    };
    let b = text.as_bytes();
    let mut i = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut bond = BondQuery::SingleOrAromatic;
    while i < b.len() {
        let c = b[i];
        match c {
            b'(' => {
                stack.push(prev.unwrap());
                i += 1;
            }
            b')' => {
                prev = stack.pop();
                i += 1;
            }
            b'-' | b'=' | b'#' | b':' | b'~' => {
                bond = match c {
                    b'-' => BondQuery::Single,
                    b'=' => BondQuery::Double,
                    b'#' => BondQuery::Triple,
                    b':' => BondQuery::Aromatic,
                    _ => BondQuery::Any,
                };
                i += 1;
            }
            _ => {
                let (expr, len) = if c == b'[' {
                    let mut depth = 0;
                    let mut j = i;
                    loop {
                        match b[j] {
                            b'[' => depth += 1,
                            b']' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                        j += 1;
                    }
                    (parse_bracket(&text[i + 1..j]), j + 1 - i)
                } else {
                    let two = text.get(i..i + 2);
                    let len = if matches!(two, Some("Cl") | Some("Br")) { 2 } else { 1 };
                    (parse_implicit_and(&text[i..i + len]), len)
                };
                let idx = p.atoms.len();
                p.atoms.push(expr);
                p.links.push(prev.map(|q| (q, bond)));
                prev = Some(idx);
                bond = BondQuery::SingleOrAromatic;
                i += len;
            }
        }
    }
    p
}

/// Graph with all hydrogens as vertices.
pub struct HGraph {
    pub number: Vec<u8>,
    pub charge: Vec<i8>,
    pub aromatic: Vec<bool>,
    pub adj: Vec<Vec<(usize, BondOrder)>>,
    /// Vertex of the molecule atom each vertex came from (itself for
    /// molecule atoms, the parent for added hydrogens).
    pub origin: Vec<usize>,
}

impl HGraph {
    pub fn new(m: &Molecule) -> HGraph {
        let n = m.num_atoms();
        let mut g = HGraph {
            number: (0..n).map(|i| m.atom(i).element.atomic_number()).collect(),
            charge: (0..n).map(|i| m.atom(i).formal_charge).collect(),
            aromatic: (0..n).map(|i| m.atom(i).aromatic).collect(),
            adj: vec![Vec::new(); n],
            origin: (0..n).collect(),
        };
        for b in m.bonds() {
            g.adj[b.begin].push((b.end, b.order));
            g.adj[b.end].push((b.begin, b.order));
        }
        for i in 0..n {
            for _ in 0..m.atom(i).total_h() {
                let h = g.number.len();
                g.number.push(1);
                g.charge.push(0);
                g.aromatic.push(false);
                g.adj.push(vec![(i, BondOrder::Single)]);
                g.origin.push(i);
                g.adj[i].push((h, BondOrder::Single));
            }
        }
        g
    }

    fn h_count(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&(u, _)| self.number[u] == 1).count()
    }

    fn eval(&self, e: &Expr, v: usize) -> bool {
        match e {
            Expr::Not(x) => !self.eval(x, v),
            Expr::And(xs) => xs.iter().all(|x| self.eval(x, v)),
            Expr::Or(xs) => xs.iter().any(|x| self.eval(x, v)),
            Expr::Prim(p) => match p {
                Prim::Any => true,
                Prim::Aliphatic => !self.aromatic[v],
                Prim::Aromatic => self.aromatic[v],
                Prim::Number(z) => self.number[v] == *z,
                Prim::Element { number, aromatic } => self.number[v] == *number && self.aromatic[v] == *aromatic,
                Prim::HCount(h) => self.h_count(v) == *h,
                Prim::Connectivity(x) => self.adj[v].len() == *x,
                Prim::Charge(q) => self.charge[v] == *q,
                Prim::Recursive(p) => self.matches_at(p, v),
            },
        }
    }

    fn bond_ok(q: BondQuery, o: BondOrder) -> bool {
        match q {
            BondQuery::SingleOrAromatic => matches!(o, BondOrder::Single | BondOrder::Aromatic),
            BondQuery::Single => o == BondOrder::Single,
            BondQuery::Double => o == BondOrder::Double,
            BondQuery::Triple => o == BondOrder::Triple,
            BondQuery::Aromatic => o == BondOrder::Aromatic,
            BondQuery::Any => true,
        }
    }

    /// Whether `p` matches with its first atom on vertex `v`.
    pub fn matches_at(&self, p: &Pattern, v: usize) -> bool {
        if !self.eval(&p.atoms[0], v) {
            return false;
        }
        let mut map = vec![usize::MAX; p.atoms.len()];
        map[0] = v;
        self.assign(p, 1, &mut map)
    }

    fn assign(&self, p: &Pattern, k: usize, map: &mut [usize]) -> bool {
        if k == p.atoms.len() {
            return true;
        }
        let (parent, q) = p.links[k].unwrap();
        let from = map[parent];
        for &(u, order) in &self.adj[from] {
            if map[..k].contains(&u) || !Self::bond_ok(q, order) || !self.eval(&p.atoms[k], u) {
                continue;
            }
            map[k] = u;
            if self.assign(p, k + 1, map) {
                return true;
            }
        }
        map[k] = usize::MAX;
        false
    }
}

/// Published atom-type patterns, in the order they are tried.
pub const CRIPPEN_PATTERNS: &[(&str, &str)] = &[
    ("C1", "[CH4]"),
    ("C1", "[CH3]C"),
    ("C1", "[CH2](C)C"),
    ("C2", "[CH](C)(C)C"),
    ("C2", "[C](C)(C)(C)C"),
    ("C3", "[CH3][N,O,P,S,F,Cl,Br,I]"),
    ("C3", "[CH2X4]([N,O,P,S,F,Cl,Br,I])[A;!#1]"),
    ("C4", "[CH1X4]([N,O,P,S,F,Cl,Br,I])([A;!#1])[A;!#1]"),
    ("C4", "[CH0X4]([N,O,P,S,F,Cl,Br,I])([A;!#1])([A;!#1])[A;!#1]"),
    ("C5", "[C]=[!C;A;!#1]"),
    ("C6", "[CH2]=C"),
    ("C6", "[CH1](=C)[A;!#1]"),
    ("C6", "[CH0](=C)([A;!#1])[A;!#1]"),
    ("C6", "[C](=C)=C"),
    ("C7", "[CX2]#[A]"),
    ("C8", "[CH3]c"),
    ("C9", "[CH3]a"),
    ("C10", "[CH2X4]a"),
    ("C11", "[CHX4]a"),
    ("C12", "[CH0X4]a"),
    ("C13", "[cH0]-[A;!C;!N;!O;!S;!F;!Cl;!Br;!I;!#1]"),
    ("C14", "[c][#9]"),
    ("C15", "[c][#17]"),
    ("C16", "[c][#35]"),
    ("C17", "[c][#53]"),
    ("C18", "[cH]"),
    ("C19", "[c](:a)(:a):a"),
    ("C20", "[c](:a)(:a)-a"),
    ("C21", "[c](:a)(:a)-C"),
    ("C22", "[c](:a)(:a)-N"),
    ("C23", "[c](:a)(:a)-O"),
    ("C24", "[c](:a)(:a)-S"),
    ("C25", "[c](:a)(:a)=[C,N,O]"),
    ("C26", "[C](=C)(a)[A;!#1]"),
    ("C26", "[C](=C)(c)a"),
    ("C26", "[CH1](=C)a"),
    ("C26", "[C]=c"),
    ("C27", "[CX4][A;!C;!N;!O;!P;!S;!F;!Cl;!Br;!I;!#1]"),
    ("CS", "[#6]"),
    ("H1", "[#1][#6]"),
    ("H1", "[#1][#1]"),
    ("H2", "[#1]O[CX4]"),
    ("H2", "[#1]Oc"),
    ("H2", "[#1]O[!#6;!#7;!#8;!#16]"),
    ("H2", "[#1][!#6;!#7;!#8]"),
    ("H3", "[#1][#7]"),
    ("H3", "[#1]O[#7]"),
    ("H4", "[#1]OC=[#6]"),
    ("H4", "[#1]OC=[#7]"),
    ("H4", "[#1]OC=O"),
    ("H4", "[#1]OC=S"),
    ("H4", "[#1]OO"),
    ("H4", "[#1]OS"),
    ("HS", "[#1]"),
    ("N1", "[NH2+0][A;!#1]"),
    ("N2", "[NH+0]([A;!#1])[A;!#1]"),
    ("N3", "[NH2+0]a"),
    ("N4", "[NH1+0]([!#1;A,a])a"),
    ("N5", "[NH+0]=[!#1;A,a]"),
    ("N6", "[N+0](=[!#1;A,a])[!#1;A,a]"),
    ("N7", "[N+0]([A;!#1])([A;!#1])[A;!#1]"),
    ("N8", "[N+0](a)([!#1;A,a])[A;!#1]"),
    ("N8", "[N+0](a)(a)a"),
    ("N9", "[N+0]#[A;!#1]"),
    ("N10", "[NH3,NH2,NH;+,+2,+3]"),
    ("N11", "[n+0]"),
    ("N12", "[n;+,+2,+3]"),
    ("N13", "[NH0;+,+2,+3]([A;!#1])([A;!#1])([A;!#1])[A;!#1]"),
    ("N13", "[NH0;+,+2,+3](=[A;!#1])([A;!#1])[!#1;A,a]"),
    ("N13", "[NH0;+,+2,+3](=[#6])=[#7]"),
    ("N14", "[N;+,+2,+3]#[A;!#1]"),
    ("N14", "[N;-,-2,-3]"),
    ("N14", "[N;+,+2,+3](=[N;-,-2,-3])=N"),
    ("NS", "[#7]"),
    ("O1", "[o]"),
    ("O2", "[OH,OH2]"),
    ("O3", "[O]([A;!#1])[A;!#1]"),
    ("O4", "[O](a)[!#1;A,a]"),
    ("O5", "[O]=[#7,#8]"),
    ("O5", "[OX1;-;$([OX1;-][#7])]"),
    ("O6", "[OX1;-;$([OX1;-][#16])]"),
    ("O6", "[O;X1;$(O=[#16;-0])]"),
    ("O12", "[O-1]C(=O)"),
    ("O7", "[OX1;-;$([OX1;-][!N;!S])]"),
    ("O8", "[O]=c"),
    ("O9", "[O]=[CH]C"),
    ("O9", "[O]=C(C)([A;!#1])"),
    ("O9", "[O]=[CH][N,O]"),
    ("O9", "[O]=[CH2]"),
    ("O9", "[O]=[CX2]=O"),
    ("O10", "[O]=[CH]c"),
    ("O10", "[O]=C([C,c])[a;!#1]"),
    ("O10", "[O]=C(c)[A;!#1]"),
    ("O11", "[O]=C([!#1;!#6])[!#1;!#6]"),
    ("OS", "[#8]"),
    ("F", "[#9-0]"),
    ("Cl", "[#17-0]"),
    ("Br", "[#35-0]"),
    ("I", "[#53-0]"),
    ("Hal", "[#9,#17,#35,#53;-]"),
    ("Hal", "[#53;+,+2,+3]"),
    ("Hal", "[+;#3,#11,#19,#37,#55]"),
    ("P", "[#15]"),
    ("S2", "[S-0]=[N,O,P,S]"),
    ("S2", "[S;-,-2,-3,-4,+1,+2,+3,+5,+6]"),
    ("S1", "[S-0]"),
    ("S3", "[s]"),
    ("Me1", "[#3,#11,#19,#37,#55]"),
    ("Me1", "[#4,#12,#20,#38,#56]"),
    ("Me1", "[#5,#13,#31,#49,#81]"),
    ("Me1", "[#14,#32,#50,#82]"),
    ("Me1", "[#33,#51,#83]"),
    ("Me1", "[#34,#52,#84]"),
];

pub struct CrippenTyper {
    patterns: Vec<(&'static str, Pattern)>,
}

impl Default for CrippenTyper {
    fn default() -> Self {
        CrippenTyper {
            patterns: CRIPPEN_PATTERNS.iter().map(|&(l, s)| (l, parse_pattern(s))).collect(),
        }
    }
}

impl CrippenTyper {
    /// Type of every vertex of the hydrogen-complete graph.
    pub fn types(&self, g: &HGraph) -> Vec<Option<&'static str>> {
        (0..g.number.len())
            .map(|v| {
                self.patterns
                    .iter()
                    .find(|(_, p)| g.matches_at(p, v))
                    .map(|(l, _)| *l)
            })
            .collect()
    }
}

/// `label -> (logp, mr)` from the bundled table.
pub fn crippen_table() -> std::collections::HashMap<String, (f64, f64)> {
    include_str!("../../data/crippen.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), (f[1].parse().unwrap(), f[2].parse().unwrap()))
        })
        .collect()
}
