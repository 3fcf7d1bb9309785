//! The hypothesis space: statements as sets of atomic states, ordered by
//! implication (set inclusion), and additive probability measures on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{FiniteLattice, Poset};
use crate::Rational;

/// Hard cap on the number of atoms.
pub const MAX_ATOMS: usize = 6;

/// Identifies a hypothesis space by its packed atom letters (byte `i` holds
/// atom `i`), so values from spaces with identical atoms are interchangeable
/// and can print themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId(u64);

impl SpaceId {
    pub fn n(self) -> usize {
        (64 - self.0.leading_zeros() as usize).div_ceil(8)
    }

    pub(crate) fn letter(self, i: usize) -> char {
        ((self.0 >> (8 * i)) as u8 as char).to_ascii_uppercase()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypothesisSpace {
    atoms: Vec<char>,
    id: SpaceId,
}

impl HypothesisSpace {
    /// Atom names are single ASCII letters, case-insensitive. `v` is
    /// reserved as the join symbol of the question syntax.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<HypothesisSpace> {
        if names.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut atoms = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref().trim();
            let mut chars = name.chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_alphabetic() && !c.eq_ignore_ascii_case(&'v') => c.to_ascii_lowercase(),
                _ => return Err(Error::InvalidAtom(name.to_string())),
            };
            if atoms.contains(&c) {
                return Err(Error::DuplicateAtom(c.to_string()));
            }
            atoms.push(c);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms { n: atoms.len(), cap: MAX_ATOMS });
        }
        let id = atoms.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c as u64) << (8 * i));
        Ok(HypothesisSpace { atoms, id: SpaceId(id) })
    }

    pub fn n(&self) -> usize {
        self.atoms.len()
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn atom_names(&self) -> Vec<String> {
        self.atoms.iter().map(|c| c.to_string()).collect()
    }

    /// Number of statements, the absurdity included.
    pub fn statement_count(&self) -> usize {
        1 << self.n()
    }

    pub(crate) fn atom_index(&self, c: char) -> Option<usize> {
        let c = c.to_ascii_lowercase();
        self.atoms.iter().position(|&a| a == c)
    }

    pub(crate) fn atom_letter(&self, i: usize) -> char {
        self.atoms[i].to_ascii_uppercase()
    }

    pub(crate) fn with_bits(&self, bits: u8) -> Statement {
        debug_assert!((bits as usize) < self.statement_count());
        Statement { bits, space: self.id }
    }

    /// The disjunction of the named atoms.
    pub fn statement<S: AsRef<str>>(&self, atoms: &[S]) -> Result<Statement> {
        let mut bits = 0u8;
        for name in atoms {
            let name = name.as_ref();
            let mut chars = name.chars();
            let i = match (chars.next(), chars.next()) {
                (Some(c), None) => self.atom_index(c),
                _ => None,
            }
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.with_bits(bits))
    }

    pub fn atom(&self, i: usize) -> Statement {
        self.with_bits(1 << i)
    }

    pub fn absurdity(&self) -> Statement {
        self.with_bits(0)
    }

    pub fn truism(&self) -> Statement {
        self.with_bits((self.statement_count() - 1) as u8)
    }

    /// All statements in bit order, the absurdity first.
    pub fn statements(&self) -> impl Iterator<Item = Statement> + '_ {
        (0..self.statement_count()).map(|b| self.with_bits(b as u8))
    }

    /// Parses the label form: concatenated atom letters (`"AB"`), or `"0"`
    /// for the absurdity.
    pub fn parse_statement(&self, label: &str) -> Result<Statement> {
        let label = label.trim();
        if label == "0" {
            return Ok(self.absurdity());
        }
        if label.is_empty() {
            return Err(Error::EmptyTerm(0));
        }
        let mut bits = 0u8;
        for c in label.chars() {
            let i = self.atom_index(c).ok_or_else(|| Error::UnknownAtom(c.to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.with_bits(bits))
    }

    pub fn label(&self, s: Statement) -> String {
        s.to_string()
    }

    pub(crate) fn check(&self, s: Statement) -> Result<()> {
        if s.space == self.id {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

/// A disjunction of atoms, stored as an atom bit set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Statement {
    bits: u8,
    space: SpaceId,
}

impl Statement {
    pub(crate) fn from_parts(bits: u8, space: SpaceId) -> Statement {
        Statement { bits, space }
    }

    pub fn bits(self) -> u8 {
        self.bits
    }

    pub fn space(self) -> SpaceId {
        self.space
    }

    pub fn is_absurd(self) -> bool {
        self.bits == 0
    }

    /// Number of atoms in the disjunction.
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.is_absurd()
    }

    fn same_space(self, other: Statement) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Implication is inclusion of atom sets.
    pub fn implies(self, other: Statement) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.bits & other.bits == self.bits)
    }

    pub fn meet(self, other: Statement) -> Result<Statement> {
        self.same_space(other)?;
        Ok(Statement { bits: self.bits & other.bits, space: self.space })
    }

    pub fn join(self, other: Statement) -> Result<Statement> {
        self.same_space(other)?;
        Ok(Statement { bits: self.bits | other.bits, space: self.space })
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_absurd() {
            return f.write_str("0");
        }
        for i in (0..self.space.n()).filter(|i| self.bits >> i & 1 == 1) {
            write!(f, "{}", self.space.letter(i))?;
        }
        Ok(())
    }
}

/// Lexicographic order of the sorted member lists of two bit sets.
pub(crate) fn lex_order(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & diff & diff.wrapping_neg() != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Smaller sets first, then [`lex_order`].
pub(crate) fn set_order(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| lex_order(a, b))
}

/// The Boolean lattice of all `2^n` statements; element `i` is the statement
/// with atom bits `i`.
#[derive(Debug, Clone)]
pub struct StatementLattice {
    space: HypothesisSpace,
    lattice: FiniteLattice,
}

impl StatementLattice {
    pub fn new(space: &HypothesisSpace) -> StatementLattice {
        let labels = space.statements().map(|s| space.label(s)).collect();
        let poset = Poset::from_order_fn(labels, |i, j| i & j == i).expect("inclusion is a partial order");
        let lattice = FiniteLattice::from_poset(poset).expect("a power set is a lattice");
        StatementLattice { space: space.clone(), lattice }
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn statement(&self, i: usize) -> Statement {
        self.space.with_bits(i as u8)
    }

    pub fn index(&self, s: Statement) -> Result<usize> {
        self.space.check(s)?;
        Ok(s.bits as usize)
    }
}

pub fn boolean_lattice(space: &HypothesisSpace) -> StatementLattice {
    StatementLattice::new(space)
}

/// An additive measure on statements given by positive atom weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    space: HypothesisSpace,
    weights: Vec<Rational>,
}

impl ProbabilityMeasure {
    pub fn new(space: &HypothesisSpace, weights: Vec<Rational>) -> Result<ProbabilityMeasure> {
        if weights.len() != space.n() {
            return Err(Error::WeightCount { expected: space.n(), got: weights.len() });
        }
        if let Some(i) = weights.iter().position(|w| *w <= Rational::zero()) {
            return Err(Error::NonPositiveWeight(space.atom_letter(i).to_string()));
        }
        Ok(ProbabilityMeasure { space: space.clone(), weights })
    }

    pub fn uniform(space: &HypothesisSpace) -> ProbabilityMeasure {
        let w = Rational::new(1, space.n() as i64);
        ProbabilityMeasure { space: space.clone(), weights: vec![w; space.n()] }
    }

    /// Independent integer weights drawn uniformly from `1..=max_weight`.
    pub fn random<R: Rng + ?Sized>(space: &HypothesisSpace, rng: &mut R, max_weight: i64) -> ProbabilityMeasure {
        let weights = (0..space.n()).map(|_| Rational::from_integer(rng.gen_range(1..=max_weight))).collect();
        ProbabilityMeasure { space: space.clone(), weights }
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Sum of all atom weights; the measure of the truism.
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn normalized(&self) -> ProbabilityMeasure {
        let total = self.total();
        ProbabilityMeasure { space: self.space.clone(), weights: self.weights.iter().map(|w| w / total).collect() }
    }

    pub fn measure(&self, s: Statement) -> Rational {
        debug_assert!(self.space.check(s).is_ok());
        self.measure_bits(s.bits)
    }

    pub(crate) fn measure_bits(&self, bits: u8) -> Rational {
        self.weights.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, w)| *w).sum()
    }

    /// `m(x ∧ t) / m(t)`.
    pub fn conditional(&self, x: Statement, t: Statement) -> Result<Rational> {
        self.space.check(x)?;
        self.space.check(t)?;
        let context = self.measure(t);
        if context.is_zero() {
            return Err(Error::ZeroMeasureContext(self.space.label(t)));
        }
        Ok(self.measure_bits(x.bits & t.bits) / context)
    }

    /// Reads `{"a": [num, den], ...}`; every atom of the space must appear.
    pub fn from_json(space: &HypothesisSpace, text: &str) -> Result<ProbabilityMeasure> {
        let raw: BTreeMap<String, RationalJson> =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut weights = vec![None; space.n()];
        for (name, value) in raw {
            let mut chars = name.chars();
            let i = match (chars.next(), chars.next()) {
                (Some(c), None) => space.atom_index(c),
                _ => None,
            }
            .ok_or_else(|| Error::UnknownAtom(name.clone()))?;
            weights[i] = Some(value.to_rational()?);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::Malformed(format!("missing weight for atom `{}`", space.atoms[i]))))
            .collect::<Result<Vec<_>>>()?;
        ProbabilityMeasure::new(space, weights)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, RationalJson> =
            self.space.atoms.iter().zip(&self.weights).map(|(c, w)| (c.to_string(), RationalJson::from(*w))).collect();
        serde_json::to_string(&map).expect("measure serializes")
    }
}

/// Rational as a `[numerator, denominator]` JSON pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson(pub i64, pub i64);

impl RationalJson {
    pub fn to_rational(self) -> Result<Rational> {
        if self.1 == 0 {
            return Err(Error::Malformed(format!("zero denominator in [{}, {}]", self.0, self.1)));
        }
        Ok(Rational::new(self.0, self.1))
    }
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson(*r.numer(), *r.denom())
    }
}

impl fmt::Display for RationalJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_one() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}/{}", self.0, self.1)
        }
    }
}
