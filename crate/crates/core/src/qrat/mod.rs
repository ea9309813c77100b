//! QRAT proofs: clause additions, deletions, and universal reductions,
//! checked step by step against a working matrix via unit propagation.

mod checker;
mod text;

pub use checker::{
    check_proof, check_refutation, CheckReport, CheckStats, Checker, RejectReason, Verdict,
};
pub use text::{parse_qrat, write_qrat};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Clause, Lit, Prefix, QbfFormula};
use crate::unitprop::{is_at_in, AtMode};

/// Which reduction rule backs `u` lines besides the always-attempted QRATU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnivRule {
    /// Plain universal reduction: no existential literal right of the pivot.
    #[default]
    Ur,
    /// Extended universal reduction via the inner-clause fixpoint.
    Eur,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckerConfig {
    pub at_mode: AtMode,
    pub univ_rule: UnivRule,
    /// When false, additions must be plain asserted tautologies.
    pub allow_qrat_additions: bool,
}

impl CheckerConfig {
    pub fn new(at_mode: AtMode, univ_rule: UnivRule, allow_qrat_additions: bool) -> CheckerConfig {
        CheckerConfig {
            at_mode,
            univ_rule,
            allow_qrat_additions,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QratError {
    #[error("pivot {0} must already be removed from the clause remainder")]
    PivotInRemainder(Lit),
    #[error("partner clause does not contain {0}")]
    MissingComplement(Lit),
    #[error("literal {0} does not occur in the clause")]
    PivotNotInClause(Lit),
    #[error("literal {0} is not universal")]
    PivotNotUniversal(Lit),
}

/// One proof step. The pivot of an addition is the literal the QRAT check
/// runs on when the clause is not a plain asserted tautology; text lines use
/// their first literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QratStep {
    Add { clause: Clause, pivot: Option<Lit> },
    Delete { clause: Clause },
    /// Replace `clause` (which must be in the working matrix) by
    /// `clause \ {pivot}`.
    UReduce { clause: Clause, pivot: Lit },
}

impl QratStep {
    /// An addition whose pivot is the clause's first literal in normal form.
    pub fn add(clause: Clause) -> QratStep {
        let pivot = clause.literals().first().copied();
        QratStep::Add { clause, pivot }
    }

    pub fn add_on(clause: Clause, pivot: Lit) -> QratStep {
        QratStep::Add {
            clause,
            pivot: Some(pivot),
        }
    }

    pub fn delete(clause: Clause) -> QratStep {
        QratStep::Delete { clause }
    }

    pub fn ureduce(clause: Clause, pivot: Lit) -> QratStep {
        QratStep::UReduce { clause, pivot }
    }

    pub fn clause(&self) -> &Clause {
        match self {
            QratStep::Add { clause, .. }
            | QratStep::Delete { clause }
            | QratStep::UReduce { clause, .. } => clause,
        }
    }
}

impl fmt::Display for QratStep {
    /// One proof-text line (without the trailing newline): the pivot comes
    /// first on `add` and `u` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = |f: &mut fmt::Formatter<'_>, clause: &Clause, pivot: Lit| -> fmt::Result {
            write!(f, "{pivot}")?;
            for lit in clause.without(pivot).iter() {
                write!(f, " {lit}")?;
            }
            write!(f, " 0")
        };
        match self {
            QratStep::Add {
                clause,
                pivot: Some(p),
            } if clause.contains(*p) => lead(f, clause, *p),
            QratStep::Add { clause, .. } => write!(f, "{clause}"),
            QratStep::Delete { clause } => write!(f, "d {clause}"),
            QratStep::UReduce { clause, pivot } => {
                write!(f, "u ")?;
                lead(f, clause, *pivot)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QratProof {
    steps: Vec<QratStep>,
}

impl QratProof {
    pub fn new(steps: Vec<QratStep>) -> QratProof {
        QratProof { steps }
    }

    pub fn steps(&self) -> &[QratStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl From<Vec<QratStep>> for QratProof {
    fn from(steps: Vec<QratStep>) -> QratProof {
        QratProof { steps }
    }
}

/// The outer resolvent of `c ∨ l` with `d` on `l`: `c` plus those literals of
/// `d` (other than `l`'s complement) whose level is at or left of `l`'s.
/// `c` is passed with `l` already removed; `d` must contain the complement.
pub fn outer_resolvent(
    prefix: &Prefix,
    c: &Clause,
    d: &Clause,
    l: Lit,
) -> Result<Clause, QratError> {
    if c.contains(l) {
        return Err(QratError::PivotInRemainder(l));
    }
    if !d.contains(!l) {
        return Err(QratError::MissingComplement(!l));
    }
    let outer = d
        .iter()
        .filter(|&k| k != !l && prefix.left_of_or_at(k.var(), l.var()));
    Ok(Clause::new(c.iter().chain(outer)))
}

/// Whether `c` has the QRAT property on `l ∈ c` w.r.t. `f`: every outer
/// resolvent against a matrix clause containing `l`'s complement is an
/// asserted tautology. Vacuously true when no such partner exists.
pub fn is_qrat_clause(
    f: &QbfFormula,
    c: &Clause,
    l: Lit,
    mode: AtMode,
) -> Result<bool, QratError> {
    is_qrat_clause_in(f.matrix(), f.prefix(), c, l, mode)
}

/// [`is_qrat_clause`] against an explicit working matrix.
pub fn is_qrat_clause_in(
    clauses: &[Clause],
    prefix: &Prefix,
    c: &Clause,
    l: Lit,
    mode: AtMode,
) -> Result<bool, QratError> {
    if !c.contains(l) {
        return Err(QratError::PivotNotInClause(l));
    }
    let remainder = c.without(l);
    for d in clauses.iter().filter(|d| d.contains(!l)) {
        let or = outer_resolvent(prefix, &remainder, d, l)
            .expect("remainder excludes the pivot and the partner has its complement");
        if !is_at_in(&or, clauses, prefix, mode) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The extended inner clause of `c` on universal `l ∈ c`: the least literal
/// set containing `c` and closed under — for every existential member `k`
/// right of `l` and every matrix clause `d` containing `k`'s complement, add
/// all literals of `d` right of `l`, plus `l`'s complement if `d` has it.
pub fn eic(f: &QbfFormula, c: &Clause, l: Lit) -> Result<Clause, QratError> {
    eic_in(f.matrix(), f.prefix(), c, l)
}

/// [`eic`] against an explicit working matrix.
pub fn eic_in(
    clauses: &[Clause],
    prefix: &Prefix,
    c: &Clause,
    l: Lit,
) -> Result<Clause, QratError> {
    if !c.contains(l) {
        return Err(QratError::PivotNotInClause(l));
    }
    if !prefix.is_universal(l.var()) {
        return Err(QratError::PivotNotUniversal(l));
    }
    let pivot_level = prefix.level(l.var()).expect("universal pivot is bound");
    let inner_existential = |k: Lit| {
        prefix.is_existential(k.var())
            && prefix.level(k.var()).expect("existential is bound") > pivot_level
    };
    let inner = |k: Lit| prefix.level(k.var()).is_some_and(|lv| lv > pivot_level);

    let mut set: BTreeSet<Lit> = c.iter().collect();
    let mut frontier: Vec<Lit> = set.iter().copied().filter(|&k| inner_existential(k)).collect();
    let mut queued: BTreeSet<Lit> = frontier.iter().copied().collect();
    while let Some(k) = frontier.pop() {
        for d in clauses.iter().filter(|d| d.contains(!k)) {
            for m in d.iter().filter(|&m| inner(m)).chain(
                d.contains(!l).then_some(!l),
            ) {
                if set.insert(m) && inner_existential(m) && queued.insert(m) {
                    frontier.push(m);
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Whether dropping universal `l` from `c` is justified: by QRATU (always
/// attempted), or by the configured rule — plain reduction (no existential
/// literal right of `l` in `c`) or extended reduction (`l`'s complement stays
/// out of the inner-clause fixpoint).
pub fn check_ureduce(
    f: &QbfFormula,
    c: &Clause,
    l: Lit,
    cfg: CheckerConfig,
) -> Result<bool, QratError> {
    check_ureduce_in(f.matrix(), f.prefix(), c, l, cfg)
}

/// [`check_ureduce`] against an explicit working matrix (which, as in the
/// checker, still contains `c`).
pub fn check_ureduce_in(
    clauses: &[Clause],
    prefix: &Prefix,
    c: &Clause,
    l: Lit,
    cfg: CheckerConfig,
) -> Result<bool, QratError> {
    if !c.contains(l) {
        return Err(QratError::PivotNotInClause(l));
    }
    if !prefix.is_universal(l.var()) {
        return Err(QratError::PivotNotUniversal(l));
    }
    if is_qrat_clause_in(clauses, prefix, c, l, cfg.at_mode)? {
        return Ok(true);
    }
    match cfg.univ_rule {
        UnivRule::Ur => Ok(ur_admits(prefix, c, l)),
        UnivRule::Eur => Ok(!eic_in(clauses, prefix, c, l)?.contains(!l)),
    }
}

/// Plain universal reduction: no existential literal of `c` lies strictly
/// right of `l`.
fn ur_admits(prefix: &Prefix, c: &Clause, l: Lit) -> bool {
    let pivot_level = prefix.level(l.var()).expect("universal pivot is bound");
    !c.iter().any(|k| {
        prefix.is_existential(k.var())
            && prefix.level(k.var()).expect("existential is bound") > pivot_level
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_qdimacs;

    fn cl(spec: &[i32]) -> Clause {
        Clause::from_dimacs(spec).unwrap()
    }

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n).unwrap()
    }

    /// e x y / a u v / e t as 1 2 / 3 4 / 5, with the four u-v clauses of the
    /// one-dimensional equality pattern plus the tail unit.
    fn squared_pattern() -> QbfFormula {
        parse_qdimacs(
            "p cnf 5 5\ne 1 2 0\na 3 4 0\ne 5 0\n\
             1 2 3 4 5 0\n1 -2 3 -4 5 0\n-1 2 -3 4 5 0\n-1 -2 -3 -4 5 0\n-5 0\n",
        )
        .unwrap()
    }

    #[test]
    fn outer_resolvent_keeps_literals_at_or_left_of_the_pivot() {
        let f = squared_pattern();
        // Remainder of the first clause after removing u (= 3), against the
        // partner holding ¬u: the x-pair survives, the tail literal does not.
        let c = cl(&[1, 2, 4, 5]);
        let d = cl(&[-1, 2, -3, 4, 5]);
        let or = outer_resolvent(f.prefix(), &c, &d, lit(3)).unwrap();
        assert_eq!(or, cl(&[1, -1, 2, 4, 5]));
        assert!(or.is_tautology());
    }

    #[test]
    fn outer_resolvent_degenerate_partners() {
        let f = squared_pattern();
        // Partner containing only the complement contributes nothing.
        let c = cl(&[1, 5]);
        let or = outer_resolvent(f.prefix(), &c, &cl(&[-3]), lit(3)).unwrap();
        assert_eq!(or, c);

        // Nothing in the partner lies at or left of an outermost pivot.
        let g = parse_qdimacs("p cnf 3 1\na 1 0\ne 2 3 0\n1 2 3 0\n").unwrap();
        let or = outer_resolvent(g.prefix(), &cl(&[2]), &cl(&[-1, 3]), lit(1)).unwrap();
        assert_eq!(or, cl(&[2]));
    }

    #[test]
    fn outer_resolvent_rejects_bad_inputs() {
        let f = squared_pattern();
        assert_eq!(
            outer_resolvent(f.prefix(), &cl(&[3, 5]), &cl(&[-3]), lit(3)),
            Err(QratError::PivotInRemainder(lit(3)))
        );
        assert_eq!(
            outer_resolvent(f.prefix(), &cl(&[5]), &cl(&[4]), lit(3)),
            Err(QratError::MissingComplement(lit(-3)))
        );
    }

    #[test]
    fn every_universal_literal_of_the_pattern_is_a_qrat_literal() {
        let f = squared_pattern();
        for clause in &f.matrix()[..4] {
            for l in clause.iter().filter(|l| f.prefix().is_universal(l.var())) {
                assert_eq!(
                    is_qrat_clause(&f, clause, l, AtMode::Propositional),
                    Ok(true),
                    "clause {clause}, literal {l}"
                );
            }
        }
    }

    #[test]
    fn qrat_clause_vacuous_and_error_cases() {
        let f = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 0\n").unwrap();
        // No clause contains ¬u, so any pivot in a fresh clause is vacuous.
        let c = cl(&[1, 2]);
        assert_eq!(is_qrat_clause(&f, &c, lit(2), AtMode::Propositional), Ok(true));
        assert_eq!(
            is_qrat_clause(&f, &c, lit(-2), AtMode::Propositional),
            Err(QratError::PivotNotInClause(lit(-2)))
        );
    }

    #[test]
    fn at_clauses_are_qrat_on_any_literal() {
        // (¬x ∨ y) with matrix {(¬x ∨ y)}: the clause itself propagates to
        // conflict when negated, so every outer resolvent check passes.
        let f = parse_qdimacs("p cnf 2 1\ne 1 2 0\n-1 2 0\n").unwrap();
        let c = cl(&[-1, 2]);
        for l in c.iter() {
            assert_eq!(is_qrat_clause(&f, &c, l, AtMode::Propositional), Ok(true));
        }
    }

    #[test]
    fn eic_fixpoint_examples() {
        // a u / e e: a single clause never extends.
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        let c = cl(&[1, 2]);
        assert_eq!(eic(&f, &c, lit(1)), Ok(cl(&[1, 2])));

        // Adding (¬u ∨ ¬e) pulls in both ¬e and ¬u.
        let g = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n").unwrap();
        assert_eq!(eic(&g, &c, lit(1)), Ok(cl(&[1, -1, 2, -2])));

        // No existential literal right of the pivot: immediate fixpoint.
        let h = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 0\n").unwrap();
        assert_eq!(eic(&h, &cl(&[1, 2]), lit(2)), Ok(cl(&[1, 2])));
    }

    #[test]
    fn eic_requires_a_universal_pivot_in_the_clause() {
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        assert_eq!(
            eic(&f, &cl(&[1, 2]), lit(2)),
            Err(QratError::PivotNotUniversal(lit(2)))
        );
        assert_eq!(
            eic(&f, &cl(&[2]), lit(1)),
            Err(QratError::PivotNotInClause(lit(1)))
        );
    }

    #[test]
    fn ureduce_passes_vacuously_when_no_partner_exists() {
        // a u / e e, matrix {(u ∨ e)}: no clause contains ¬u, so the QRATU
        // branch holds regardless of the configured rule.
        let f = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        let c = cl(&[1, 2]);
        for rule in [UnivRule::Ur, UnivRule::Eur] {
            let cfg = CheckerConfig::new(AtMode::Propositional, rule, false);
            assert_eq!(check_ureduce(&f, &c, lit(1), cfg), Ok(true), "{rule:?}");
        }
    }

    #[test]
    fn ureduce_rules_diverge_when_qratu_fails() {
        // a u / e e f, matrix {(u ∨ e), (¬u ∨ f)}. The outer resolvent with
        // (¬u ∨ f) is just (e), which does not propagate to conflict; plain
        // reduction is blocked by e right of u; the fixpoint never reaches ¬u.
        let f = parse_qdimacs("p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n-1 3 0\n").unwrap();
        let c = cl(&[1, 2]);
        let ur = CheckerConfig::new(AtMode::Propositional, UnivRule::Ur, false);
        let eur = CheckerConfig::new(AtMode::Propositional, UnivRule::Eur, false);
        assert_eq!(check_ureduce(&f, &c, lit(1), ur), Ok(false));
        assert_eq!(check_ureduce(&f, &c, lit(1), eur), Ok(true));
    }

    #[test]
    fn ureduce_blocked_when_the_complement_enters_the_fixpoint() {
        let f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n").unwrap();
        let c = cl(&[1, 2]);
        for rule in [UnivRule::Ur, UnivRule::Eur] {
            let cfg = CheckerConfig::new(AtMode::Propositional, rule, false);
            assert_eq!(check_ureduce(&f, &c, lit(1), cfg), Ok(false), "{rule:?}");
        }
    }

    #[test]
    fn ureduce_validates_the_pivot() {
        let f = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 2 0\n").unwrap();
        let cfg = CheckerConfig::default();
        assert_eq!(
            check_ureduce(&f, &cl(&[1, 2]), lit(1), cfg),
            Err(QratError::PivotNotUniversal(lit(1)))
        );
        assert_eq!(
            check_ureduce(&f, &cl(&[1, 2]), lit(-2), cfg),
            Err(QratError::PivotNotInClause(lit(-2)))
        );
    }

    #[test]
    fn plain_reduction_ignores_universal_literals_to_the_right() {
        // e x / a u w / e f: dropping u from (x u w) under plain reduction.
        // QRATU fails (the partner's outer resolvent (x w) does not propagate
        // to conflict), but no existential literal of the clause is right of
        // u: x is left and w is universal at the same level.
        let f = parse_qdimacs("p cnf 4 2\ne 1 0\na 2 3 0\ne 4 0\n1 2 3 0\n-2 4 0\n").unwrap();
        let c = cl(&[1, 2, 3]);
        let cfg = CheckerConfig::default();
        assert_eq!(check_ureduce(&f, &c, lit(2), cfg), Ok(true));
    }

    #[test]
    fn step_display_puts_the_pivot_first() {
        assert_eq!(QratStep::add(cl(&[2, -1])).to_string(), "-1 2 0");
        assert_eq!(QratStep::add_on(cl(&[2, -1]), lit(2)).to_string(), "2 -1 0");
        assert_eq!(QratStep::add(Clause::empty()).to_string(), "0");
        assert_eq!(QratStep::delete(cl(&[3, 1])).to_string(), "d 1 3 0");
        assert_eq!(
            QratStep::ureduce(cl(&[1, 4, 2]), lit(4)).to_string(),
            "u 4 1 2 0"
        );
    }
}
