//! Symmetric operator families `J_t = L_alpha (x) S_beta`.
//!
//! `L_alpha`, `S_beta` are the antisymmetric SO(d) generators `|i><j| - |j><i|`
//! (`i < j`), so every product is real, integer-valued and symmetric. The index
//! `t` runs lexicographically over `((i, j), (k, l))`.
//!
//! Tripartite operators act on `d x d x d`. For split `a|bc` the pair factor is
//! ordered cyclically: `1|23 -> (2, 3)`, `2|13 -> (3, 1)`, `3|12 -> (1, 2)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Split of the parties into two nonempty, disjoint, covering sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: &[usize], parties: usize) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if let Some(&bad) = a.iter().find(|&&i| i >= parties) {
            return Err(Error::BadSubsystemIndex { index: bad, parties });
        }
        let b: Vec<usize> = (0..parties).filter(|i| !a.contains(i)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::BadSplit(format!("{side_a:?} of {parties} parties")));
        }
        Ok(Self { side_a: a, side_b: b })
    }

    /// First party against the rest.
    pub fn first_vs_rest(parties: usize) -> Result<Self> {
        Self::new(&[0], parties)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.side_a {
            write!(f, "{}", i + 1)?;
        }
        f.write_str("|")?;
        for i in &self.side_b {
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// One of the three single-party-vs-pair splits of a tripartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TripartiteSplit {
    #[serde(rename = "1|23")]
    A,
    #[serde(rename = "2|13")]
    B,
    #[serde(rename = "3|12")]
    C,
}

impl TripartiteSplit {
    pub const ALL: [TripartiteSplit; 3] = [Self::A, Self::B, Self::C];

    /// The single party (0-based).
    pub fn party(self) -> usize {
        match self {
            Self::A => 0,
            Self::B => 1,
            Self::C => 2,
        }
    }

    /// The pair, in the cyclic order used for the pair operator.
    pub fn pair(self) -> (usize, usize) {
        let p = self.party();
        ((p + 1) % 3, (p + 2) % 3)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "1|23",
            Self::B => "2|13",
            Self::C => "3|12",
        }
    }

    pub fn bipartition(self) -> Bipartition {
        Bipartition::new(&[self.party()], 3).expect("valid tripartite split")
    }
}

impl fmt::Display for TripartiteSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TripartiteSplit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1|23" | "1" => Ok(Self::A),
            "2|13" | "2" => Ok(Self::B),
            "3|12" | "3" => Ok(Self::C),
            other => Err(Error::BadSplit(other.into())),
        }
    }
}

/// Generator pair indices behind `J_t`: `(i, j)` on side A and `(k, l)` on side B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorIndex {
    pub side_a: (usize, usize),
    pub side_b: (usize, usize),
}

/// Ordered family of symmetric operators with their index map.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    operators: Vec<CMatrix>,
    index_map: Vec<GeneratorIndex>,
    label: String,
}

impl GeneratorSet {
    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn operator(&self, t: usize) -> &CMatrix {
        &self.operators[t]
    }

    pub fn index(&self, t: usize) -> GeneratorIndex {
        self.index_map[t]
    }

    /// `N`, the number of operators.
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Dimension of the space the operators act on.
    pub fn dim(&self) -> usize {
        self.operators.first().map_or(0, |j| j.rows())
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
}

fn so_generator(d: usize, i: usize, j: usize) -> CMatrix {
    let mut l = CMatrix::zeros(d, d);
    l[(i, j)] = C64::new(1.0, 0.0);
    l[(j, i)] = C64::new(-1.0, 0.0);
    l
}

/// The `d(d-1)/2` generators `|i><j| - |j><i|` of SO(d), `i < j` lexicographic.
pub fn so_generators(d: usize) -> Result<Vec<CMatrix>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(pairs(d).map(|(i, j)| so_generator(d, i, j)).collect())
}

/// `N = m n (m-1)(n-1)/4` operators `L_alpha (x) S_beta` on an `m x n` system.
pub fn bipartite_generators(m: usize, n: usize) -> Result<GeneratorSet> {
    if m < 2 {
        return Err(Error::DimensionTooSmall(m));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut operators = Vec::new();
    let mut index_map = Vec::new();
    for a in pairs(m) {
        let l = so_generator(m, a.0, a.1);
        for b in pairs(n) {
            operators.push(l.kron(&so_generator(n, b.0, b.1)));
            index_map.push(GeneratorIndex { side_a: a, side_b: b });
        }
    }
    Ok(GeneratorSet {
        operators,
        index_map,
        label: format!("{m}x{n}"),
    })
}

/// Embeds `single (x) pair` into `d x d x d` for `split`: `single` acts on the
/// split's party, `pair` (a `d^2 x d^2` operator) on its cyclically ordered pair.
pub fn embed_tripartite(single: &CMatrix, pair: &CMatrix, d: usize, split: TripartiteSplit) -> CMatrix {
    let dim = d * d * d;
    let party = split.party();
    let (b, c) = split.pair();
    let digit = |x: usize, s: usize| (x / d.pow(2 - s as u32)) % d;
    CMatrix::from_fn(dim, dim, |r, col| {
        let s = single[(digit(r, party), digit(col, party))];
        if s.re == 0.0 && s.im == 0.0 {
            return s;
        }
        let pr = digit(r, b) * d + digit(r, c);
        let pc = digit(col, b) * d + digit(col, c);
        s * pair[(pr, pc)]
    })
}

/// Generators of the `d` vs `d^2` split, embedded into the `d^3` space.
pub fn tripartite_generators(d: usize, split: TripartiteSplit) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let n = d * d;
    let mut operators = Vec::new();
    let mut index_map = Vec::new();
    for a in pairs(d) {
        let l = so_generator(d, a.0, a.1);
        for b in pairs(n) {
            operators.push(embed_tripartite(&l, &so_generator(n, b.0, b.1), d, split));
            index_map.push(GeneratorIndex { side_a: a, side_b: b });
        }
    }
    Ok(GeneratorSet {
        operators,
        index_map,
        label: format!("{d}x{d}x{d} {}", split.label()),
    })
}

/// Hand-picked three-qubit operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleFamily {
    /// Pair operator `|00><11| - |11><00|`.
    Ghz,
    /// Pair operator `|00><10| - |10><00|`.
    W,
}

impl FromStr for ExampleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ghz" => Ok(Self::Ghz),
            "w" => Ok(Self::W),
            other => Err(Error::BadSplit(format!("unknown operator family {other}"))),
        }
    }
}

/// `J^{i|jk} = S^(i) (x) L^(jk)` for the three splits, in `TripartiteSplit::ALL` order.
pub fn example_operators(family: ExampleFamily) -> [CMatrix; 3] {
    let single = so_generator(2, 0, 1);
    let pair = match family {
        ExampleFamily::Ghz => so_generator(4, 0, 3),
        ExampleFamily::W => so_generator(4, 0, 2),
    };
    TripartiteSplit::ALL.map(|s| embed_tripartite(&single, &pair, 2, s))
}

/// Operator triples `(J^{1|23}_t, J^{2|13}_t, J^{3|12}_t)` aligned by `t`.
#[derive(Debug, Clone)]
pub struct OperatorTriples {
    triples: Vec<[CMatrix; 3]>,
    label: String,
}

impl OperatorTriples {
    /// Canonical generators of the `d` vs `d^2` splits, aligned by the shared index `t`.
    pub fn canonical(d: usize) -> Result<Self> {
        let sets = TripartiteSplit::ALL.map(|s| tripartite_generators(d, s));
        let [a, b, c] = sets;
        let (a, b, c) = (a?, b?, c?);
        let triples = (0..a.len())
            .map(|t| [a.operator(t).clone(), b.operator(t).clone(), c.operator(t).clone()])
            .collect();
        Ok(Self {
            triples,
            label: format!("canonical d={d}"),
        })
    }

    /// A single hand-picked triple (`N = 1`).
    pub fn example(family: ExampleFamily) -> Self {
        Self {
            triples: alloc::vec![example_operators(family)],
            label: format!("{family:?}").to_ascii_lowercase(),
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triple(&self, t: usize) -> &[CMatrix; 3] {
        &self.triples[t]
    }

    pub fn dim(&self) -> usize {
        self.triples.first().map_or(0, |t| t[0].rows())
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}
