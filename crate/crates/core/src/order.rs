//! Finite posets and lattices over explicit, labelled elements.
//!
//! Orders are stored as dense bit matrices (one row of `u64` words per
//! element) so that bound computations are word-wide intersections. Element
//! order is insertion order and governs every iteration and serialization.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of elements a poset may hold.
pub const MAX_ELEMENTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn count(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in ones(self.row(i)) {
                t.set(j, i);
            }
        }
        t
    }
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + bit)
        })
    })
}

/// A finite partially ordered set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // up.get(i, j) <=> i <= j
    up: BitMatrix,
    // down.get(j, i) <=> i <= j
    down: BitMatrix,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `leq_pairs` over `elements`.
    pub fn new<S: AsRef<str>>(elements: &[S], leq_pairs: &[(S, S)]) -> Result<Poset> {
        let labels: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut up = BitMatrix::new(n);
        for i in 0..n {
            up.set(i, i);
        }
        for (a, b) in leq_pairs {
            let lookup =
                |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()));
            up.set(lookup(a)?, lookup(b)?);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up.row(k).to_vec();
            for i in 0..n {
                if i != k && up.get(i, k) {
                    let words = up.words;
                    for (dst, src) in up.bits[i * words..(i + 1) * words].iter_mut().zip(&row_k) {
                        *dst |= src;
                    }
                }
            }
        }
        let down = up.transpose();
        let poset = Poset { labels, index, up, down };
        poset.check_antisymmetric()?;
        Ok(poset)
    }

    /// Builds a poset from a relation that is already a partial order, such
    /// as set inclusion. Antisymmetry is still checked.
    pub fn from_order_fn<F>(labels: Vec<String>, leq: F) -> Result<Poset>
    where
        F: Fn(usize, usize) -> bool,
    {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut up = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if i == j || leq(i, j) {
                    up.set(i, j);
                }
            }
        }
        let down = up.transpose();
        let poset = Poset { labels, index, up, down };
        poset.check_antisymmetric()?;
        debug_assert!(poset.is_transitive());
        Ok(poset)
    }

    fn check_antisymmetric(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in ones(self.up.row(i)) {
                if j != i && self.up.get(j, i) {
                    return Err(Error::Cycle(self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up.get(i, j)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.check_antisymmetric().is_ok()
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).filter(|&j| self.leq(i, j)).all(|j| (0..n).all(|k| !self.leq(j, k) || self.leq(i, k))))
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between,
    /// sorted by `(a, b)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in ones(self.up.row(a)) {
                if a == b {
                    continue;
                }
                // The interval [a, b] holds exactly a and b.
                let between: u32 = self.up.row(a).iter().zip(self.down.row(b)).map(|(x, y)| (x & y).count_ones()).sum();
                if between == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::TooManyElements { count: labels.len(), cap: MAX_ELEMENTS });
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(Error::DuplicateElement(label.clone()));
        }
    }
    Ok(index)
}

/// A poset in which every pair has a unique meet and join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Fills the meet and join tables by exhaustive bound computation.
    pub fn from_poset(poset: Poset) -> Result<FiniteLattice> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::Malformed("a lattice needs at least one element".into()));
        }
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut scratch = vec![0u64; poset.up.words];
        for i in 0..n {
            for j in i..n {
                let m = greatest_in(&poset.down, i, j, &mut scratch)
                    .ok_or_else(|| Error::NoMeet(poset.labels[i].clone(), poset.labels[j].clone()))?;
                let s = greatest_in(&poset.up, i, j, &mut scratch)
                    .ok_or_else(|| Error::NoJoin(poset.labels[i].clone(), poset.labels[j].clone()))?;
                meet[i * n + j] = m as u32;
                meet[j * n + i] = m as u32;
                join[i * n + j] = s as u32;
                join[j * n + i] = s as u32;
            }
        }
        // Every pair has a meet, so the meet of everything is the bottom.
        let bottom = (0..n).fold(0, |acc, i| meet[acc * n + i] as usize);
        let top = (0..n).fold(0, |acc, i| join[acc * n + i] as usize);
        Ok(FiniteLattice { poset, meet, join, bottom, top })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn labels(&self) -> &[String] {
        self.poset.labels()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.poset.index_of(label)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    #[inline]
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j] as usize
    }

    #[inline]
    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.poset.covers()
    }

    /// Graphviz digraph of the Hasse diagram, edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, label) in self.labels().iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label={}];", dot_quote(label));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let n = self.len();
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<&str>> {
            (0..n).map(|i| (0..n).map(|j| self.label(f(i, j))).collect()).collect()
        };
        let doc = DiagramJson {
            elements: self.labels(),
            covers: self.covers().into_iter().map(|(a, b)| [self.label(a), self.label(b)]).collect(),
            meet_table: table(&|i, j| self.meet(i, j)),
            join_table: table(&|i, j| self.join(i, j)),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("diagram serializes");
        text.push('\n');
        text
    }

    pub fn export(&self, format: DiagramFormat) -> String {
        match format {
            DiagramFormat::Dot => self.to_dot(),
            DiagramFormat::Json => self.to_json(),
        }
    }
}

/// Finds the member `g` of `rows[i] & rows[j]` whose own row equals that
/// intersection: the greatest lower bound when rows are down-sets, the least
/// upper bound when they are up-sets.
fn greatest_in(rows: &BitMatrix, i: usize, j: usize, scratch: &mut [u64]) -> Option<usize> {
    for ((s, a), b) in scratch.iter_mut().zip(rows.row(i)).zip(rows.row(j)) {
        *s = a & b;
    }
    let size: u32 = scratch.iter().map(|w| w.count_ones()).sum();
    ones(scratch).find(|&g| rows.count(g) == size && rows.row(g) == &scratch[..])
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Serialize)]
struct DiagramJson<'a> {
    elements: &'a [String],
    covers: Vec<[&'a str; 2]>,
    meet_table: Vec<Vec<&'a str>>,
    join_table: Vec<Vec<&'a str>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    Dot,
    Json,
}
