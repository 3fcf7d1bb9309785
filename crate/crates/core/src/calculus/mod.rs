//! Valuations, bi-valuations and the rule checkers of the inquiry calculus.

pub mod bivaluation;
pub mod rules;
pub mod valuation;
pub mod verify;

pub use bivaluation::{
    probability_bivaluation, relevance_bivaluation, BiValuation, BiValuationFile, Degree, LatticeKind,
    LoadedBiValuation, Number, Table,
};
pub use rules::{
    check_certainty, check_chain_lower, check_chain_upper, check_derivation_identities, check_derivation_steps,
    check_product_questions, check_product_rule, check_product_statements, check_sum_rule, Combine, Violation,
    ViolationReport, Witness, MAX_REPORTED,
};
pub use valuation::{
    cocardinality_valuation, measure_valuation, random_covaluation, weighted_covaluation, Orientation, Valuation,
};
pub use verify::{
    verify_all, verify_bivaluation, MeasureSpec, SuiteSummary, VerificationSummary, RANDOM_MAX_WEIGHT, SUITES,
};
