//! Two-argument degrees `w(x | t)` over a finite lattice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::valuation::Valuation;
use crate::error::{Error, Result};
use crate::order::{FiniteLattice, Poset};
use crate::question::Question;
use crate::statement::{HypothesisSpace, ProbabilityMeasure, RationalJson, StatementLattice};
use crate::Rational;

/// Scalar a bi-valuation table can hold.
pub trait Degree:
    Copy + PartialOrd + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    fn abs_diff(self, other: Self) -> Self;
    /// Gap allowed between the two sides of a rule.
    fn default_tolerance() -> Self;
    fn to_number(self) -> Number;
}

impl Degree for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        Rational::from_integer(1)
    }

    fn abs_diff(self, other: Self) -> Self {
        (self - other).abs()
    }

    fn default_tolerance() -> Self {
        <Rational as Zero>::zero()
    }

    fn to_number(self) -> Number {
        Number::Exact(self.into())
    }
}

impl Degree for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn abs_diff(self, other: Self) -> Self {
        (self - other).abs()
    }

    fn default_tolerance() -> Self {
        1e-9
    }

    fn to_number(self) -> Number {
        Number::Float(self)
    }
}

/// A reported value: exact `[num, den]` or a float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Exact(RationalJson),
    Float(f64),
}

impl Number {
    pub fn to_f64(self) -> f64 {
        match self {
            Number::Exact(r) => r.0 as f64 / r.1 as f64,
            Number::Float(x) => x,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{r}"),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Dense `(element, context)` table; `None` marks undefined pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BiValuation<V> {
    labels: Vec<String>,
    values: Vec<Option<V>>,
}

impl<V: Degree> BiValuation<V> {
    pub fn undefined(labels: Vec<String>) -> Self {
        let n = labels.len();
        BiValuation { labels, values: vec![None; n * n] }
    }

    pub fn from_fn<F>(lattice: &FiniteLattice, f: F) -> Self
    where
        F: Fn(usize, usize) -> Option<V>,
    {
        let n = lattice.len();
        let values = (0..n).flat_map(|x| (0..n).map(move |t| (x, t))).map(|(x, t)| f(x, t)).collect();
        BiValuation { labels: lattice.labels().to_vec(), values }
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

    /// `w(x | t)`.
    #[inline]
    pub fn get(&self, x: usize, t: usize) -> Option<V> {
        self.values[x * self.labels.len() + t]
    }

    pub fn set(&mut self, x: usize, t: usize, value: Option<V>) {
        let n = self.labels.len();
        self.values[x * n + t] = value;
    }

    pub fn defined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Defined entries as `(x, t, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, V)> + '_ {
        let n = self.labels.len();
        self.values.iter().enumerate().filter_map(move |(i, v)| v.map(|v| (i / n, i % n, v)))
    }

    /// Copy with `w(x | t)` shifted by `delta`; `None` if the entry is undefined.
    pub fn perturbed(&self, x: usize, t: usize, delta: V) -> Option<Self> {
        let v = self.get(x, t)?;
        let mut out = self.clone();
        out.set(x, t, Some(v + delta));
        Some(out)
    }
}

/// `p(x | t) = m(x ∧ t) / m(t)`, undefined for zero-measure contexts.
pub fn probability_bivaluation(m: &ProbabilityMeasure, statements: &StatementLattice) -> BiValuation<Rational> {
    debug_assert_eq!(m.space(), statements.space());
    let lattice = statements.lattice();
    let measures: Vec<Rational> = (0..lattice.len()).map(|i| m.measure(statements.statement(i))).collect();
    BiValuation::from_fn(lattice, |x, t| {
        let context = measures[t];
        (!context.is_zero()).then(|| measures[lattice.meet(x, t)] / context)
    })
}

/// `d(a | t) = u(a ∨ t) / u(t)` for an antitone valuation `u`.
pub fn relevance_bivaluation(u: &Valuation, lattice: &FiniteLattice) -> BiValuation<Rational> {
    BiValuation::from_fn(lattice, |a, t| {
        let context = u.get(t);
        (!context.is_zero()).then(|| u.get(lattice.join(a, t)) / context)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Statements,
    Questions,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeKind::Statements => "statements",
            LatticeKind::Questions => "questions",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Exact(RationalJson),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EntryJson {
    x: String,
    t: String,
    value: ValueJson,
}

/// On-disk bi-valuation. `kind` and `atoms` are optional on input: the kind
/// is inferred from the presence of the absurdity `"0"`, the atoms from the
/// letters used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiValuationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<LatticeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<Vec<String>>,
    elements: Vec<String>,
    entries: Vec<EntryJson>,
}

impl BiValuationFile {
    pub fn from_table<V: Degree>(w: &BiValuation<V>, kind: LatticeKind, space: &HypothesisSpace) -> Self {
        let entries = w
            .entries()
            .map(|(x, t, v)| EntryJson {
                x: w.labels[x].clone(),
                t: w.labels[t].clone(),
                value: match v.to_number() {
                    Number::Exact(r) => ValueJson::Exact(r),
                    Number::Float(f) => ValueJson::Float(f),
                },
            })
            .collect();
        BiValuationFile { kind: Some(kind), atoms: Some(space.atom_names()), elements: w.labels.clone(), entries }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bi-valuation serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    /// Resolves labels against a lattice rebuilt from the listed elements.
    pub fn load(&self) -> Result<LoadedBiValuation> {
        let space = match &self.atoms {
            Some(atoms) => HypothesisSpace::new(atoms)?,
            None => {
                let mut letters: Vec<String> = self
                    .elements
                    .iter()
                    .flat_map(|e| e.chars())
                    .filter(|c| c.is_ascii_alphabetic() && !c.eq_ignore_ascii_case(&'v'))
                    .map(|c| c.to_ascii_lowercase().to_string())
                    .collect();
                letters.sort();
                letters.dedup();
                HypothesisSpace::new(&letters)?
            }
        };
        let kind = self.kind.unwrap_or_else(|| {
            if self.elements.iter().any(|e| e.trim() == "0") {
                LatticeKind::Statements
            } else {
                LatticeKind::Questions
            }
        });
        let parse = |label: &str| -> Result<(u64, String)> {
            match kind {
                LatticeKind::Statements => {
                    let s = space.parse_statement(label)?;
                    Ok((s.bits() as u64, s.to_string()))
                }
                LatticeKind::Questions => {
                    let q = Question::parse(&space, label)?;
                    Ok((q.answer_bits(), q.to_string()))
                }
            }
        };
        let parsed = self.elements.iter().map(|e| parse(e)).collect::<Result<Vec<_>>>()?;
        let labels = parsed.iter().map(|(_, l)| l.clone()).collect();
        let poset = Poset::from_order_fn(labels, |i, j| parsed[i].0 & parsed[j].0 == parsed[i].0)?;
        let lattice = FiniteLattice::from_poset(poset)?;

        let resolve = |label: &str| -> Result<usize> {
            let (_, canonical) = parse(label)?;
            lattice.index_of(&canonical).ok_or_else(|| Error::UnknownElement(label.to_string()))
        };
        let all_exact = self.entries.iter().all(|e| matches!(e.value, ValueJson::Exact(_)));
        let mut seen = HashMap::new();
        let mut exact = BiValuation::<Rational>::undefined(lattice.labels().to_vec());
        let mut float = BiValuation::<f64>::undefined(lattice.labels().to_vec());
        for entry in &self.entries {
            let (x, t) = (resolve(&entry.x)?, resolve(&entry.t)?);
            if seen.insert((x, t), ()).is_some() {
                return Err(Error::Malformed(format!("duplicate entry ({} | {})", entry.x, entry.t)));
            }
            match entry.value {
                ValueJson::Exact(r) => {
                    let r = r.to_rational()?;
                    exact.set(x, t, Some(r));
                    float.set(x, t, r.to_f64());
                }
                ValueJson::Float(f) => {
                    if !f.is_finite() {
                        return Err(Error::Malformed(format!("non-finite value for ({} | {})", entry.x, entry.t)));
                    }
                    float.set(x, t, Some(f));
                }
            }
        }
        let table = if all_exact { Table::Exact(exact) } else { Table::Float(float) };
        Ok(LoadedBiValuation { kind, space, lattice, table })
    }
}

#[derive(Debug, Clone)]
pub enum Table {
    Exact(BiValuation<Rational>),
    Float(BiValuation<f64>),
}

#[derive(Debug, Clone)]
pub struct LoadedBiValuation {
    pub kind: LatticeKind,
    pub space: HypothesisSpace,
    pub lattice: FiniteLattice,
    pub table: Table,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::valuation::cocardinality_valuation;
    use crate::question::question_lattice;
    use crate::statement::boolean_lattice;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn abc() -> HypothesisSpace {
        HypothesisSpace::new(&["a", "b", "c"]).unwrap()
    }

    #[test]
    fn probability_entries() {
        let space = abc();
        let sl = boolean_lattice(&space);
        let w = probability_bivaluation(&ProbabilityMeasure::uniform(&space), &sl);
        let idx = |l: &str| sl.lattice().index_of(l).unwrap();
        assert_eq!(w.get(idx("A"), idx("ABC")), Some(r(1, 3)));
        assert_eq!(w.get(idx("0"), idx("ABC")), Some(r(0, 1)));
        for i in 1..8 {
            assert_eq!(w.get(i, i), Some(r(1, 1)));
            assert_eq!(w.get(i, 0), None);
        }
        assert!(w.entries().all(|(_, _, v)| v >= r(0, 1) && v <= r(1, 1)));
    }

    #[test]
    fn relevance_entries() {
        let space = abc();
        let ql = question_lattice(&space, true).unwrap();
        let l = ql.lattice();
        let d = relevance_bivaluation(&cocardinality_valuation(&ql), l);
        let idx = |s: &str| l.index_of(s).unwrap();
        let bottom = idx("A v B v C");
        assert_eq!(d.get(idx("ABC"), bottom), Some(r(1, 5)));
        assert_eq!(d.get(idx("AB v C"), bottom), Some(r(4, 5)));
        for a in 0..l.len() {
            for t in 0..l.len() {
                let v = d.get(a, t).unwrap();
                assert!(v > r(0, 1) && v <= r(1, 1));
                if l.leq(a, t) {
                    assert_eq!(v, r(1, 1));
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let space = abc();
        let ql = question_lattice(&space, true).unwrap();
        let d = relevance_bivaluation(&cocardinality_valuation(&ql), ql.lattice());
        let file = BiValuationFile::from_table(&d, LatticeKind::Questions, &space);
        let loaded = BiValuationFile::parse(&file.to_json()).unwrap().load().unwrap();
        assert_eq!(loaded.kind, LatticeKind::Questions);
        assert_eq!(loaded.lattice.labels(), ql.lattice().labels());
        match loaded.table {
            Table::Exact(t) => assert_eq!(t, d),
            Table::Float(_) => panic!("expected exact table"),
        }
    }

    #[test]
    fn file_inference_and_floats() {
        let text = r#"{
            "elements": ["0", "A", "B", "AB"],
            "entries": [
                {"x": "A", "t": "AB", "value": 0.5},
                {"x": "b", "t": "BA", "value": [1, 2]}
            ]
        }"#;
        let loaded = BiValuationFile::parse(text).unwrap().load().unwrap();
        assert_eq!(loaded.kind, LatticeKind::Statements);
        assert_eq!(loaded.space.n(), 2);
        match loaded.table {
            Table::Float(t) => {
                assert_eq!(t.get(1, 3), Some(0.5));
                assert_eq!(t.get(2, 3), Some(0.5));
                assert_eq!(t.defined_count(), 2);
            }
            Table::Exact(_) => panic!("expected float table"),
        }
    }

    #[test]
    fn file_errors() {
        let bad_label = r#"{"elements": ["0", "A"], "entries": [{"x": "Q", "t": "A", "value": [1, 1]}]}"#;
        assert!(BiValuationFile::parse(bad_label).unwrap().load().is_err());
        let dup = r#"{"elements": ["0", "A"], "entries": [
            {"x": "A", "t": "A", "value": [1, 1]}, {"x": "A", "t": "A", "value": [1, 1]}]}"#;
        assert!(matches!(BiValuationFile::parse(dup).unwrap().load(), Err(Error::Malformed(_))));
        assert!(matches!(BiValuationFile::parse("{"), Err(Error::Malformed(_))));
        let not_lattice = r#"{"kind": "questions", "atoms": ["a", "b"], "elements": ["A", "B"], "entries": []}"#;
        assert!(matches!(BiValuationFile::parse(not_lattice).unwrap().load(), Err(Error::NoMeet(..))));
    }

    #[test]
    fn perturbation() {
        let space = abc();
        let sl = boolean_lattice(&space);
        let w = probability_bivaluation(&ProbabilityMeasure::uniform(&space), &sl);
        let p = w.perturbed(1, 7, r(1, 100)).unwrap();
        assert_eq!(p.get(1, 7), Some(r(1, 3) + r(1, 100)));
        assert!(w.perturbed(1, 0, r(1, 100)).is_none());
    }
}
