//! Single-argument valuations and the reference measure family for questions.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rules::{RawWitness, Sweep, ViolationReport};
use crate::error::{Error, Result};
use crate::order::FiniteLattice;
use crate::question::QuestionLattice;
use crate::statement::{ProbabilityMeasure, StatementLattice};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `x <= y` implies `u(x) <= u(y)`.
    Monotone,
    /// `x <= y` implies `u(x) >= u(y)`.
    Antitone,
}

/// Rational valuation indexed by lattice element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    values: Vec<Rational>,
    orientation: Orientation,
}

impl Valuation {
    pub fn new(values: Vec<Rational>, orientation: Orientation) -> Valuation {
        Valuation { values, orientation }
    }

    #[inline]
    pub fn get(&self, i: usize) -> Rational {
        self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|v| *v > Rational::zero())
    }

    /// Pairs breaking `u(x ∨ y) + u(x ∧ y) = u(x) + u(y)`.
    pub fn modularity_report(&self, lattice: &FiniteLattice) -> ViolationReport {
        let mut sweep = Sweep::new("modularity", lattice, Rational::zero());
        for x in 0..lattice.len() {
            for y in x..lattice.len() {
                let lhs = self.get(lattice.join(x, y)) + self.get(lattice.meet(x, y));
                let rhs = self.get(x) + self.get(y);
                sweep.compare("modularity", lhs, rhs, || RawWitness::xy(x, y));
            }
        }
        sweep.finish()
    }

    /// Comparable pairs whose values run against the orientation. The gap
    /// is the size of the inversion.
    pub fn orientation_report(&self, lattice: &FiniteLattice) -> ViolationReport {
        let mut sweep = Sweep::new("orientation", lattice, Rational::zero());
        for x in 0..lattice.len() {
            for y in 0..lattice.len() {
                if x == y || !lattice.leq(x, y) {
                    continue;
                }
                let (lo, hi) = match self.orientation {
                    Orientation::Monotone => (self.get(x), self.get(y)),
                    Orientation::Antitone => (self.get(y), self.get(x)),
                };
                // Equal sides when ordered correctly.
                sweep.compare("orientation", lo.min(hi), lo, || RawWitness::xy(x, y));
            }
        }
        sweep.finish()
    }
}

/// `x ↦ m(x)` on the statement lattice.
pub fn measure_valuation(m: &ProbabilityMeasure, statements: &StatementLattice) -> Valuation {
    let values = (0..statements.lattice().len()).map(|i| m.measure(statements.statement(i))).collect();
    Valuation::new(values, Orientation::Monotone)
}

/// `u(Q) = 2^n - |Q|`.
pub fn cocardinality_valuation(questions: &QuestionLattice) -> Valuation {
    let total = questions.space().statement_count() as i64;
    let values = questions.questions().iter().map(|q| Rational::from_integer(total - q.len() as i64)).collect();
    Valuation::new(values, Orientation::Antitone)
}

/// `u(Q) = offset + Σ weight(s)` over the non-absurd statements `s` that do
/// not answer `Q`. `weights[k]` belongs to the statement with atom bits
/// `k + 1`.
pub fn weighted_covaluation(questions: &QuestionLattice, weights: &[Rational], offset: Rational) -> Result<Valuation> {
    let expected = questions.space().statement_count() - 1;
    if weights.len() != expected {
        return Err(Error::WeightCount { expected, got: weights.len() });
    }
    let space = questions.space();
    if let Some(k) = weights.iter().position(|w| *w <= Rational::zero()) {
        let s = space.statements().nth(k + 1).expect("weight index within space");
        return Err(Error::NonPositiveWeight(s.to_string()));
    }
    if offset <= Rational::zero() {
        return Err(Error::NonPositiveOffset);
    }
    let values = questions
        .questions()
        .iter()
        .map(|q| {
            let answers = q.answer_bits();
            offset + (0..expected).filter(|k| answers >> k & 1 == 0).map(|k| weights[k]).sum::<Rational>()
        })
        .collect();
    Ok(Valuation::new(values, Orientation::Antitone))
}

/// Integer statement weights and offset drawn from `1..=max_weight`.
pub fn random_covaluation<R: Rng + ?Sized>(questions: &QuestionLattice, rng: &mut R, max_weight: i64) -> Valuation {
    let count = questions.space().statement_count() - 1;
    let weights: Vec<Rational> = (0..count).map(|_| Rational::from_integer(rng.gen_range(1..=max_weight))).collect();
    let offset = Rational::from_integer(rng.gen_range(1..=max_weight));
    weighted_covaluation(questions, &weights, offset).expect("weights drawn positive")
}
