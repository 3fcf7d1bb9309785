//! Questions as downward-closed sets of answering statements.
//!
//! A question over `n` atoms is a bit set over the `2^n - 1` non-absurd
//! statements: bit `k` stands for the statement with atom bits `k + 1`. The
//! set is closed downward under implication, so meet and join are plain
//! intersection and union.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{FiniteLattice, Poset};
use crate::statement::{lex_order, set_order, HypothesisSpace, SpaceId, Statement};

/// Largest atom count enumerated without the explicit override.
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Question {
    answers: u64,
    space: SpaceId,
}

#[inline]
fn bit(statement_bits: u64) -> u64 {
    1 << (statement_bits - 1)
}

/// True when every answer's immediate weakenings (one atom dropped) are
/// answers too, which implies closure under all of implication.
fn is_downward_closed(answers: u64) -> bool {
    let mut rest = answers;
    while rest != 0 {
        let s = rest.trailing_zeros() as u64 + 1;
        rest &= rest - 1;
        let mut atoms = s;
        while atoms != 0 {
            let a = atoms & atoms.wrapping_neg();
            atoms ^= a;
            let lower = s ^ a;
            if lower != 0 && answers & bit(lower) == 0 {
                return false;
            }
        }
    }
    true
}

/// Every non-absurd statement implying `s`.
fn ideal_bits(s: u64) -> u64 {
    let mut out = 0;
    let mut sub = s;
    while sub != 0 {
        out |= bit(sub);
        sub = (sub - 1) & s;
    }
    out
}

fn all_atoms(n: usize) -> u64 {
    (0..n).fold(0, |acc, i| acc | bit(1 << i))
}

impl Question {
    /// Validates closure and non-emptiness of a raw answer bit set.
    pub fn from_answers(space: &HypothesisSpace, answers: u64) -> Result<Question> {
        let width = space.statement_count() - 1;
        if width < 64 && answers >> width != 0 {
            return Err(Error::Malformed(format!("answer bits beyond the {width} statements of the space")));
        }
        if answers == 0 {
            return Err(Error::VacuousQuestion);
        }
        if !is_downward_closed(answers) {
            return Err(Error::NotDownwardClosed);
        }
        Ok(Question { answers, space: space.id() })
    }

    /// Builds a question from answering statements; the set must already be
    /// downward closed and must not contain the absurdity.
    pub fn from_statements(space: &HypothesisSpace, statements: &[Statement]) -> Result<Question> {
        let mut answers = 0;
        for &s in statements {
            if s.space() != space.id() {
                return Err(Error::SpaceMismatch);
            }
            if s.is_absurd() {
                return Err(Error::AbsurdStatement);
            }
            answers |= bit(s.bits() as u64);
        }
        Question::from_answers(space, answers)
    }

    /// The question answered by exactly the statements implying `s`.
    pub fn ideal(space: &HypothesisSpace, s: Statement) -> Result<Question> {
        if s.space() != space.id() {
            return Err(Error::SpaceMismatch);
        }
        if s.is_absurd() {
            return Err(Error::AbsurdStatement);
        }
        Ok(Question { answers: ideal_bits(s.bits() as u64), space: space.id() })
    }

    /// Parses `term (sep term)*` where a term is one or more atom letters
    /// (any order, any case) and `sep` is `v`, `∨` or `|`.
    pub fn parse(space: &HypothesisSpace, text: &str) -> Result<Question> {
        let mut answers = 0u64;
        let mut term = 0u64;
        let mut term_start = 0;
        let mut seen_term = false;
        let finish = |term: &mut u64, pos: usize, answers: &mut u64| {
            if *term == 0 {
                return Err(Error::EmptyTerm(pos));
            }
            *answers |= ideal_bits(*term);
            *term = 0;
            Ok(())
        };
        for (pos, ch) in text.char_indices() {
            match ch {
                'v' | 'V' | '∨' | '|' => {
                    finish(&mut term, term_start, &mut answers)?;
                    term_start = pos + ch.len_utf8();
                }
                c if c.is_whitespace() => {}
                c if c.is_ascii_alphabetic() => {
                    let i = space.atom_index(c).ok_or_else(|| Error::UnknownAtom(c.to_string()))?;
                    term |= 1 << i;
                    seen_term = true;
                }
                c => return Err(Error::UnexpectedChar { ch: c, pos }),
            }
        }
        if !seen_term && answers == 0 {
            return Err(Error::EmptyExpression);
        }
        finish(&mut term, term_start, &mut answers)?;
        Ok(Question { answers, space: space.id() })
    }

    pub fn answer_bits(self) -> u64 {
        self.answers
    }

    pub fn space(self) -> SpaceId {
        self.space
    }

    /// Number of answering statements.
    pub fn len(self) -> u32 {
        self.answers.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.answers == 0
    }

    pub fn contains(self, s: Statement) -> bool {
        s.space() == self.space && !s.is_absurd() && self.answers & bit(s.bits() as u64) != 0
    }

    fn statement(self, bits: u64) -> Statement {
        Statement::from_parts(bits as u8, self.space)
    }

    fn members(self) -> impl Iterator<Item = u64> {
        let mut rest = self.answers;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let s = rest.trailing_zeros() as u64 + 1;
            rest &= rest - 1;
            Some(s)
        })
    }

    /// Answers, smallest statements first.
    pub fn answers(self) -> Vec<Statement> {
        let mut bits: Vec<u64> = self.members().collect();
        bits.sort_by(|a, b| set_order(*a, *b));
        bits.into_iter().map(|b| self.statement(b)).collect()
    }

    /// The maximal answers, largest statements first: the irredundant join
    /// that generates this question.
    pub fn terms(self) -> Vec<Statement> {
        let mut maximal: Vec<u64> = self.members().filter(|&s| self.members().all(|t| t == s || t & s != s)).collect();
        maximal.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then_with(|| lex_order(*a, *b)));
        maximal.into_iter().map(|b| self.statement(b)).collect()
    }

    pub fn canonical_form(self) -> String {
        self.to_string()
    }

    fn same_space(self, other: Question) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Intersection of answer sets; an empty intersection is an error.
    pub fn meet(self, other: Question) -> Result<Question> {
        self.same_space(other)?;
        let answers = self.answers & other.answers;
        if answers == 0 {
            return Err(Error::VacuousQuestion);
        }
        Ok(Question { answers, space: self.space })
    }

    pub fn join(self, other: Question) -> Result<Question> {
        self.same_space(other)?;
        Ok(Question { answers: self.answers | other.answers, space: self.space })
    }

    /// Answering `self` answers `other`: `self ⊆ other`.
    pub fn answers_question(self, other: Question) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.answers & other.answers == self.answers)
    }

    /// Answered by every atomic state.
    pub fn is_real(self) -> bool {
        let atoms = all_atoms(self.space.n());
        self.answers & atoms == atoms
    }

    pub fn to_json(self) -> QuestionJson {
        QuestionJson {
            terms: self.terms().iter().map(|s| s.to_string()).collect(),
            answers: self.answers().iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionJson {
    pub terms: Vec<String>,
    pub answers: Vec<String>,
}

/// Cardinality descending, then lexicographic on answer bits.
fn enumeration_order(a: &u64, b: &u64) -> std::cmp::Ordering {
    b.count_ones().cmp(&a.count_ones()).then_with(|| lex_order(*a, *b))
}

/// All questions over `space` (only the real ones when `real_only`), largest
/// answer sets first. Six atoms require `allow_six`.
pub fn enumerate_questions(space: &HypothesisSpace, real_only: bool, allow_six: bool) -> Result<Vec<Question>> {
    let n = space.n();
    if n > DEFAULT_ENUMERATION_CAP && !allow_six {
        return Err(Error::CapacityExceeded { n, cap: DEFAULT_ENUMERATION_CAP });
    }
    // A linear extension of implication: smaller statements first.
    let mut order: Vec<u64> = (1..1u64 << n).collect();
    order.sort_by(|a, b| set_order(*a, *b));
    let forced = if real_only { all_atoms(n) } else { 0 };
    let mut out = Vec::new();
    extend_down_sets(&order, 0, 0, forced, &mut out);
    out.sort_by(enumeration_order);
    Ok(out.into_iter().map(|answers| Question { answers, space: space.id() }).collect())
}

pub fn enumerate_real_questions(space: &HypothesisSpace) -> Result<Vec<Question>> {
    enumerate_questions(space, true, false)
}

fn extend_down_sets(order: &[u64], k: usize, set: u64, forced: u64, out: &mut Vec<u64>) {
    let Some(&s) = order.get(k) else {
        if set != 0 {
            out.push(set);
        }
        return;
    };
    let b = bit(s);
    if forced & b == 0 {
        extend_down_sets(order, k + 1, set, forced, out);
    }
    let mut atoms = s;
    let mut includable = true;
    while atoms != 0 {
        let a = atoms & atoms.wrapping_neg();
        atoms ^= a;
        let lower = s ^ a;
        if lower != 0 && set & bit(lower) == 0 {
            includable = false;
            break;
        }
    }
    if includable {
        extend_down_sets(order, k + 1, set | b, forced, out);
    }
}

/// Enumerated questions ordered by answer-set inclusion.
#[derive(Debug, Clone)]
pub struct QuestionLattice {
    space: HypothesisSpace,
    questions: Vec<Question>,
    index: HashMap<u64, usize>,
    lattice: FiniteLattice,
    real_only: bool,
}

impl QuestionLattice {
    pub fn new(space: &HypothesisSpace, real_only: bool, allow_six: bool) -> Result<QuestionLattice> {
        let questions = enumerate_questions(space, real_only, allow_six)?;
        let labels = questions.iter().map(|q| q.to_string()).collect();
        let poset =
            Poset::from_order_fn(labels, |i, j| questions[i].answers & questions[j].answers == questions[i].answers)?;
        let lattice = FiniteLattice::from_poset(poset)?;
        let index = questions.iter().enumerate().map(|(i, q)| (q.answers, i)).collect();
        Ok(QuestionLattice { space: space.clone(), questions, index, lattice, real_only })
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn question(&self, i: usize) -> Question {
        self.questions[i]
    }

    pub fn index(&self, q: Question) -> Option<usize> {
        if q.space != self.space.id() {
            return None;
        }
        self.index.get(&q.answers).copied()
    }

    pub fn is_real_only(&self) -> bool {
        self.real_only
    }
}

pub fn question_lattice(space: &HypothesisSpace, real_only: bool) -> Result<QuestionLattice> {
    QuestionLattice::new(space, real_only, false)
}
