//! Runs every rule checker over both lattices and aggregates the results.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bivaluation::{probability_bivaluation, relevance_bivaluation, BiValuation, Degree, LatticeKind};
use super::bivaluation::{LoadedBiValuation, Table};
use super::rules::{
    check_chain_lower, check_chain_upper, check_derivation_steps, check_product_questions, check_product_statements,
    check_sum_rule, Violation, ViolationReport, MAX_REPORTED,
};
use super::valuation::{cocardinality_valuation, random_covaluation};
use crate::error::Result;
use crate::order::FiniteLattice;
use crate::question::QuestionLattice;
use crate::statement::{boolean_lattice, HypothesisSpace, ProbabilityMeasure};
use crate::Rational;

/// The seven rule suites, in report order.
pub const SUITES: [&str; 7] = [
    "sum_rule",
    "chain_upper",
    "chain_lower",
    "product_statements",
    "product_questions",
    "derivation_statements",
    "derivation_questions",
];

/// Largest integer weight drawn for random measures.
pub const RANDOM_MAX_WEIGHT: i64 = 20;

/// Which measures drive a verification run.
#[derive(Debug, Clone)]
pub enum MeasureSpec {
    /// Uniform atom weights with the co-cardinality relevance.
    Uniform,
    /// Given atom weights with the co-cardinality relevance.
    Weights(ProbabilityMeasure),
    /// `trials` seeded draws of random atom weights and random weighted
    /// co-valuations.
    Random { seed: u64, trials: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    /// First violations found, capped.
    pub sample: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSummary {
    pub atoms: Vec<String>,
    pub trials: usize,
    pub suites: Vec<SuiteSummary>,
    pub total_violations: u64,
}

impl VerificationSummary {
    fn new(atoms: Vec<String>, names: &[&str]) -> Self {
        let suites = names
            .iter()
            .map(|n| SuiteSummary { name: n.to_string(), checked: 0, violations: 0, sample: Vec::new() })
            .collect();
        VerificationSummary { atoms, trials: 0, suites, total_violations: 0 }
    }

    fn add(&mut self, suite: &str, report: ViolationReport) {
        let s = self.suites.iter_mut().find(|s| s.name == suite).expect("known suite");
        s.checked += report.checked;
        s.violations += report.total;
        self.total_violations += report.total;
        let room = MAX_REPORTED.saturating_sub(s.sample.len());
        s.sample.extend(report.violations.into_iter().take(room));
    }

    pub fn is_clean(&self) -> bool {
        self.total_violations == 0
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteSummary> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    /// Fixed-width table, one row per suite, followed by up to `detail`
    /// violations per failing suite.
    pub fn render_table(&self, detail: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "atoms: {}  trials: {}", self.atoms.join(","), self.trials);
        let _ = writeln!(out, "{:<24}{:>14}{:>12}", "suite", "checked", "violations");
        for s in &self.suites {
            let _ = writeln!(out, "{:<24}{:>14}{:>12}", s.name, s.checked, s.violations);
        }
        let _ = writeln!(out, "total violations: {}", self.total_violations);
        for s in self.suites.iter().filter(|s| s.violations > 0) {
            for v in s.sample.iter().take(detail) {
                let _ =
                    writeln!(out, "  {} [{}] {}: lhs={} rhs={} gap={}", s.name, v.rule, v.witness, v.lhs, v.rhs, v.gap);
            }
        }
        out
    }
}

fn statement_suites<V: Degree>(summary: &mut VerificationSummary, w: &BiValuation<V>, l: &FiniteLattice, tol: V) {
    summary.add("sum_rule", check_sum_rule(w, l, tol));
    summary.add("chain_upper", check_chain_upper(w, l, tol));
    summary.add("product_statements", check_product_statements(w, l, tol));
    summary.add("derivation_statements", check_derivation_steps(w, l, LatticeKind::Statements, tol));
}

fn question_suites<V: Degree>(summary: &mut VerificationSummary, d: &BiValuation<V>, l: &FiniteLattice, tol: V) {
    summary.add("sum_rule", check_sum_rule(d, l, tol));
    summary.add("chain_lower", check_chain_lower(d, l, tol));
    summary.add("product_questions", check_product_questions(d, l, tol));
    summary.add("derivation_questions", check_derivation_steps(d, l, LatticeKind::Questions, tol));
}

/// Builds both lattices over `space` (real questions only) and runs all
/// seven suites for each trial's probability and relevance tables.
pub fn verify_all(space: &HypothesisSpace, spec: &MeasureSpec) -> Result<VerificationSummary> {
    let statements = boolean_lattice(space);
    let questions = QuestionLattice::new(space, true, false)?;
    let mut summary = VerificationSummary::new(space.atom_names(), &SUITES);
    let zero = Rational::default_tolerance();

    let run = |m: &ProbabilityMeasure, d: &BiValuation<Rational>, summary: &mut VerificationSummary| {
        let w = probability_bivaluation(m, &statements);
        statement_suites(summary, &w, statements.lattice(), zero);
        question_suites(summary, d, questions.lattice(), zero);
        summary.trials += 1;
    };
    match spec {
        MeasureSpec::Uniform | MeasureSpec::Weights(_) => {
            let m = match spec {
                MeasureSpec::Weights(m) => m.clone(),
                _ => ProbabilityMeasure::uniform(space),
            };
            let d = relevance_bivaluation(&cocardinality_valuation(&questions), questions.lattice());
            run(&m, &d, &mut summary);
        }
        MeasureSpec::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*trials {
                let m = ProbabilityMeasure::random(space, &mut rng, RANDOM_MAX_WEIGHT);
                let u = random_covaluation(&questions, &mut rng, RANDOM_MAX_WEIGHT);
                let d = relevance_bivaluation(&u, questions.lattice());
                run(&m, &d, &mut summary);
            }
        }
    }
    Ok(summary)
}

/// Runs the four suites that apply to a loaded table's lattice kind.
pub fn verify_bivaluation(loaded: &LoadedBiValuation) -> VerificationSummary {
    let names: &[&str] = match loaded.kind {
        LatticeKind::Statements => &["sum_rule", "chain_upper", "product_statements", "derivation_statements"],
        LatticeKind::Questions => &["sum_rule", "chain_lower", "product_questions", "derivation_questions"],
    };
    let mut summary = VerificationSummary::new(loaded.space.atom_names(), names);
    summary.trials = 1;
    let l = &loaded.lattice;
    match (&loaded.table, loaded.kind) {
        (Table::Exact(w), LatticeKind::Statements) => {
            statement_suites(&mut summary, w, l, Rational::default_tolerance())
        }
        (Table::Exact(w), LatticeKind::Questions) => question_suites(&mut summary, w, l, Rational::default_tolerance()),
        (Table::Float(w), LatticeKind::Statements) => statement_suites(&mut summary, w, l, f64::default_tolerance()),
        (Table::Float(w), LatticeKind::Questions) => question_suites(&mut summary, w, l, f64::default_tolerance()),
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_three_atoms_is_clean() {
        let space = HypothesisSpace::new(&["a", "b", "c"]).unwrap();
        let summary = verify_all(&space, &MeasureSpec::Uniform).unwrap();
        assert_eq!(summary.suites.len(), 7);
        assert!(summary.is_clean(), "{}", summary.render_table(5));
        assert!(summary.suites.iter().all(|s| s.checked > 0));
    }

    #[test]
    fn single_atom_is_clean() {
        let space = HypothesisSpace::new(&["a"]).unwrap();
        assert!(verify_all(&space, &MeasureSpec::Uniform).unwrap().is_clean());
    }

    #[test]
    fn random_trials_are_clean_and_deterministic() {
        let space = HypothesisSpace::new(&["a", "b", "c"]).unwrap();
        let spec = MeasureSpec::Random { seed: 3, trials: 10 };
        let a = verify_all(&space, &spec).unwrap();
        assert!(a.is_clean());
        assert_eq!(a.trials, 10);
        assert_eq!(a.to_json(), verify_all(&space, &spec).unwrap().to_json());
    }

    #[test]
    fn table_lists_every_suite() {
        let space = HypothesisSpace::new(&["a", "b"]).unwrap();
        let table = verify_all(&space, &MeasureSpec::Uniform).unwrap().render_table(3);
        for name in SUITES {
            assert!(table.contains(name));
        }
        assert!(table.contains("total violations: 0"));
    }
}
