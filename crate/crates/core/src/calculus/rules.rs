//! Exhaustive checkers for the sum rule, the two chain rules, the specific
//! product rules and the identities they are assembled from.
//!
//! Every checker sweeps all applicable tuples of the lattice in a fixed
//! nested order and compares the two sides of its rule. Tuples touching an
//! undefined table entry are skipped. The product rule and its three
//! supporting identities are written once against a [`Combine`] operator:
//! the statement forms use the meet, the question forms the join.

use serde::Serialize;

use super::bivaluation::{BiValuation, Degree, LatticeKind, Number};
use crate::order::FiniteLattice;

/// Reported violations per report; the total count is always kept.
pub const MAX_REPORTED: usize = 1000;

/// Elements of a violating tuple, by label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

/// Witness in element indices, resolved to labels only when reported.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct RawWitness {
    x: Option<usize>,
    y: Option<usize>,
    z: Option<usize>,
    t: Option<usize>,
}

impl RawWitness {
    pub(crate) fn xy(x: usize, y: usize) -> RawWitness {
        RawWitness { x: Some(x), y: Some(y), ..Default::default() }
    }

    pub(crate) fn xt(x: usize, t: usize) -> RawWitness {
        RawWitness { x: Some(x), t: Some(t), ..Default::default() }
    }

    pub(crate) fn xyt(x: usize, y: usize, t: usize) -> RawWitness {
        RawWitness { x: Some(x), y: Some(y), t: Some(t), ..Default::default() }
    }

    pub(crate) fn xyz(x: usize, y: usize, z: usize) -> RawWitness {
        RawWitness { x: Some(x), y: Some(y), z: Some(z), ..Default::default() }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts = [("x", &self.x), ("y", &self.y), ("z", &self.z), ("t", &self.t)];
        let mut first = true;
        for (name, value) in parts {
            if let Some(v) = value {
                if !first {
                    f.write_str(", ")?;
                }
                write!(f, "{name}={v}")?;
                first = false;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: Witness,
    pub lhs: Number,
    pub rhs: Number,
    pub gap: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub suite: String,
    /// Tuples compared.
    pub checked: u64,
    /// Violations found, including those beyond the reported cap.
    pub total: u64,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn empty(suite: &str) -> Self {
        ViolationReport { suite: suite.to_string(), checked: 0, total: 0, violations: Vec::new() }
    }

    pub fn is_clean(&self) -> bool {
        self.total == 0
    }

    /// Appends `other`, keeping the cap.
    pub fn absorb(&mut self, other: ViolationReport) {
        self.checked += other.checked;
        self.total += other.total;
        let room = MAX_REPORTED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    pub fn count_rule(&self, rule: &str) -> usize {
        self.violations.iter().filter(|v| v.rule == rule).count()
    }
}

pub(crate) struct Sweep<'a, V> {
    lattice: &'a FiniteLattice,
    tolerance: V,
    report: ViolationReport,
}

impl<'a, V: Degree> Sweep<'a, V> {
    pub(crate) fn new(suite: &str, lattice: &'a FiniteLattice, tolerance: V) -> Self {
        Sweep { lattice, tolerance, report: ViolationReport::empty(suite) }
    }

    #[inline]
    pub(crate) fn compare(&mut self, rule: &'static str, lhs: V, rhs: V, witness: impl FnOnce() -> RawWitness) {
        self.report.checked += 1;
        let gap = lhs.abs_diff(rhs);
        if gap > self.tolerance {
            self.report.total += 1;
            if self.report.violations.len() < MAX_REPORTED {
                let raw = witness();
                let label = |i: Option<usize>| i.map(|i| self.lattice.label(i).to_string());
                self.report.violations.push(Violation {
                    rule,
                    witness: Witness { x: label(raw.x), y: label(raw.y), z: label(raw.z), t: label(raw.t) },
                    lhs: lhs.to_number(),
                    rhs: rhs.to_number(),
                    gap: gap.to_number(),
                });
            }
        }
    }

    pub(crate) fn finish(self) -> ViolationReport {
        self.report
    }
}

/// The lattice operation a product rule factors over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// Statements: the context sits above, implication flows upward.
    Meet,
    /// Questions: the context sits below, relevance flows downward.
    Join,
}

impl Combine {
    #[inline]
    pub fn apply(self, lattice: &FiniteLattice, a: usize, b: usize) -> usize {
        match self {
            Combine::Meet => lattice.meet(a, b),
            Combine::Join => lattice.join(a, b),
        }
    }

    pub fn dual(self) -> Combine {
        match self {
            Combine::Meet => Combine::Join,
            Combine::Join => Combine::Meet,
        }
    }

    pub fn for_kind(kind: LatticeKind) -> Combine {
        match kind {
            LatticeKind::Statements => Combine::Meet,
            LatticeKind::Questions => Combine::Join,
        }
    }

    fn names(self) -> IdentityNames {
        match self {
            Combine::Meet => IdentityNames {
                product: "product_statements",
                compact: "product_statements_compact",
                absorption: "meet_absorption",
                intermediate: "meet_intermediate_context",
                nested: "meet_nested_context",
            },
            Combine::Join => IdentityNames {
                product: "product_questions",
                compact: "product_questions_compact",
                absorption: "join_absorption",
                intermediate: "join_intermediate_context",
                nested: "join_nested_context",
            },
        }
    }
}

struct IdentityNames {
    product: &'static str,
    compact: &'static str,
    absorption: &'static str,
    intermediate: &'static str,
    nested: &'static str,
}

/// `w(x ∨ y | t) + w(x ∧ y | t) = w(x | t) + w(y | t)` for every context `t`.
pub fn check_sum_rule<V: Degree>(w: &BiValuation<V>, lattice: &FiniteLattice, tolerance: V) -> ViolationReport {
    let n = lattice.len();
    let mut sweep = Sweep::new("sum_rule", lattice, tolerance);
    for t in 0..n {
        for x in 0..n {
            let Some(wx) = w.get(x, t) else { continue };
            for y in x..n {
                let (Some(wy), Some(wj), Some(wm)) =
                    (w.get(y, t), w.get(lattice.join(x, y), t), w.get(lattice.meet(x, y), t))
                else {
                    continue;
                };
                sweep.compare("sum_rule", wj + wm, wx + wy, || RawWitness::xyt(x, y, t));
            }
        }
    }
    sweep.finish()
}

fn up_sets(lattice: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = lattice.len();
    (0..n).map(|x| (0..n).filter(|&y| lattice.leq(x, y)).collect()).collect()
}

/// Over every chain `x <= y <= z`: `w(x | z) = w(x | y) w(y | z)`.
pub fn check_chain_upper<V: Degree>(w: &BiValuation<V>, lattice: &FiniteLattice, tolerance: V) -> ViolationReport {
    let ups = up_sets(lattice);
    let mut sweep = Sweep::new("chain_upper", lattice, tolerance);
    for x in 0..lattice.len() {
        for &y in &ups[x] {
            let Some(xy) = w.get(x, y) else { continue };
            for &z in &ups[y] {
                let (Some(xz), Some(yz)) = (w.get(x, z), w.get(y, z)) else { continue };
                sweep.compare("chain_upper", xz, xy * yz, || RawWitness::xyz(x, y, z));
            }
        }
    }
    sweep.finish()
}

/// Over every chain `x <= y <= z`: `w(z | x) = w(y | x) w(z | y)`.
pub fn check_chain_lower<V: Degree>(w: &BiValuation<V>, lattice: &FiniteLattice, tolerance: V) -> ViolationReport {
    let ups = up_sets(lattice);
    let mut sweep = Sweep::new("chain_lower", lattice, tolerance);
    for x in 0..lattice.len() {
        for &y in &ups[x] {
            let Some(yx) = w.get(y, x) else { continue };
            for &z in &ups[y] {
                let (Some(zx), Some(zy)) = (w.get(z, x), w.get(z, y)) else { continue };
                sweep.compare("chain_lower", zx, yx * zy, || RawWitness::xyz(x, y, z));
            }
        }
    }
    sweep.finish()
}

/// The specific product rule `w(y ⊙ z | x) = w(z | x ⊙ y) w(y | x)` over all
/// triples, plus its compact form `w(x ⊙ y | t) = w(y | x) w(x | t)` over
/// the triples where `x ⊙ t = x`.
pub fn check_product_rule<V: Degree>(
    w: &BiValuation<V>,
    lattice: &FiniteLattice,
    op: Combine,
    tolerance: V,
) -> ViolationReport {
    let n = lattice.len();
    let names = op.names();
    let mut sweep = Sweep::new(names.product, lattice, tolerance);
    for x in 0..n {
        for y in 0..n {
            let Some(yx) = w.get(y, x) else { continue };
            let xy = op.apply(lattice, x, y);
            for z in 0..n {
                let (Some(lhs), Some(z_xy)) = (w.get(op.apply(lattice, y, z), x), w.get(z, xy)) else {
                    continue;
                };
                sweep.compare(names.product, lhs, z_xy * yx, || RawWitness::xyz(x, y, z));
            }
        }
    }
    for t in 0..n {
        for x in 0..n {
            if op.apply(lattice, x, t) != x {
                continue;
            }
            let Some(xt) = w.get(x, t) else { continue };
            for y in 0..n {
                let (Some(lhs), Some(yx)) = (w.get(op.apply(lattice, x, y), t), w.get(y, x)) else {
                    continue;
                };
                sweep.compare(names.compact, lhs, yx * xt, || RawWitness::xyt(x, y, t));
            }
        }
    }
    sweep.finish()
}

pub fn check_product_statements<V: Degree>(
    w: &BiValuation<V>,
    lattice: &FiniteLattice,
    tolerance: V,
) -> ViolationReport {
    check_product_rule(w, lattice, Combine::Meet, tolerance)
}

pub fn check_product_questions<V: Degree>(
    w: &BiValuation<V>,
    lattice: &FiniteLattice,
    tolerance: V,
) -> ViolationReport {
    check_product_rule(w, lattice, Combine::Join, tolerance)
}

/// The three identities the product rule is assembled from, with `⊙` the
/// given operator:
///
/// * absorption: `w(x ⊙ y | x) = w(y | x)`
/// * intermediate context: `w(x ⊙ y ⊙ z | x ⊙ y) = w(z | x ⊙ y)`
/// * nested context: `w(x ⊙ y ⊙ z | x) = w(y ⊙ z | x)`
pub fn check_derivation_identities<V: Degree>(
    w: &BiValuation<V>,
    lattice: &FiniteLattice,
    op: Combine,
    tolerance: V,
) -> ViolationReport {
    let n = lattice.len();
    let names = op.names();
    let suite = match op {
        Combine::Meet => "derivation_statements",
        Combine::Join => "derivation_questions",
    };
    let mut sweep = Sweep::new(suite, lattice, tolerance);
    for x in 0..n {
        for y in 0..n {
            let (Some(lhs), Some(rhs)) = (w.get(op.apply(lattice, x, y), x), w.get(y, x)) else { continue };
            sweep.compare(names.absorption, lhs, rhs, || RawWitness::xy(x, y));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = op.apply(lattice, x, y);
            for z in 0..n {
                let (Some(lhs), Some(rhs)) = (w.get(op.apply(lattice, xy, z), xy), w.get(z, xy)) else {
                    continue;
                };
                sweep.compare(names.intermediate, lhs, rhs, || RawWitness::xyz(x, y, z));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = op.apply(lattice, x, y);
            for z in 0..n {
                let yz = op.apply(lattice, y, z);
                let (Some(lhs), Some(rhs)) = (w.get(op.apply(lattice, xy, z), x), w.get(yz, x)) else {
                    continue;
                };
                sweep.compare(names.nested, lhs, rhs, || RawWitness::xyz(x, y, z));
            }
        }
    }
    sweep.finish()
}

pub fn check_derivation_steps<V: Degree>(
    w: &BiValuation<V>,
    lattice: &FiniteLattice,
    kind: LatticeKind,
    tolerance: V,
) -> ViolationReport {
    check_derivation_identities(w, lattice, Combine::for_kind(kind), tolerance)
}

/// `w(x | x) = 1` wherever defined.
pub fn check_certainty<V: Degree>(w: &BiValuation<V>, lattice: &FiniteLattice, tolerance: V) -> ViolationReport {
    let mut sweep = Sweep::new("certainty", lattice, tolerance);
    for x in 0..lattice.len() {
        if let Some(v) = w.get(x, x) {
            sweep.compare("certainty", v, V::one(), || RawWitness::xt(x, x));
        }
    }
    sweep.finish()
}
