//! Finite statement and question lattices, and exhaustive checkers for the
//! rules an inquiry calculus must obey on them.
//!
//! Statements over `n` atomic states form a Boolean lattice ordered by
//! implication; probability is the bi-valuation `m(x ∧ t) / m(t)` of an
//! additive measure `m`. Questions are downward-closed sets of non-absurd
//! statements ordered by inclusion; relevance is the bi-valuation
//! `u(a ∨ t) / u(t)` of an antitone modular valuation `u`. The checkers in
//! [`calculus`] sweep every tuple of a finite lattice in exact arithmetic.

pub mod calculus;
pub mod error;
pub mod order;
pub mod question;
pub mod statement;

pub use error::{Error, Result};
pub use order::{DiagramFormat, FiniteLattice, Poset};
pub use question::{enumerate_questions, enumerate_real_questions, question_lattice, Question, QuestionLattice};
pub use statement::{boolean_lattice, HypothesisSpace, ProbabilityMeasure, Statement, StatementLattice};

/// Exact rational used for all measure arithmetic.
pub type Rational = num_rational::Rational64;
