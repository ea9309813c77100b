//! Step-by-step QRAT checking over a mutable working matrix.

use std::fmt;

use crate::formula::{Clause, Prefix, QbfFormula, Var};
use crate::unitprop::{propagate, AtMode, PropagationOutcome};

use super::{outer_resolvent, CheckerConfig, QratProof, QratStep, UnivRule};

/// Why a step was rejected. `code()` is the stable machine-readable form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// An addition is neither an asserted tautology nor a QRAT clause on its
    /// pivot (QRAT additions may also be disabled or the pivot non-existential).
    NotAtNorQrat,
    DeleteNotPresent,
    UreduceNotPresent,
    UreduceUnjustified,
    /// A non-asserted addition needs a pivot literal but the step has none.
    PivotMissing,
    PivotNotUniversal(crate::formula::Lit),
    PivotNotInClause(crate::formula::Lit),
    UnboundVariable(Var),
    /// Every step checked out but no empty clause was ever added.
    NotARefutation,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::NotAtNorQrat => "not-at-nor-qrat",
            RejectReason::DeleteNotPresent => "delete-not-present",
            RejectReason::UreduceNotPresent => "ureduce-not-present",
            RejectReason::UreduceUnjustified => "ureduce-unjustified",
            RejectReason::PivotMissing => "pivot-missing",
            RejectReason::PivotNotUniversal(_) => "pivot-not-universal",
            RejectReason::PivotNotInClause(_) => "pivot-not-in-clause",
            RejectReason::UnboundVariable(_) => "unbound-variable",
            RejectReason::NotARefutation => "not-a-refutation",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::NotAtNorQrat => {
                write!(f, "clause is neither an asserted tautology nor QRAT on its pivot")
            }
            RejectReason::DeleteNotPresent => {
                write!(f, "deleted clause is not in the working matrix")
            }
            RejectReason::UreduceNotPresent => {
                write!(f, "reduced clause is not in the working matrix")
            }
            RejectReason::UreduceUnjustified => {
                write!(f, "reduction is justified by neither QRATU nor the configured rule")
            }
            RejectReason::PivotMissing => write!(f, "non-asserted addition carries no pivot"),
            RejectReason::PivotNotUniversal(l) => write!(f, "pivot {l} is not universal"),
            RejectReason::PivotNotInClause(l) => write!(f, "pivot {l} does not occur in the clause"),
            RejectReason::UnboundVariable(v) => {
                write!(f, "variable {v} is not bound by the prefix")
            }
            RejectReason::NotARefutation => {
                write!(f, "proof verified but never added the empty clause")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    VerifiedRefutation,
    VerifiedDerivation,
    /// Rejected at the 1-based `step`. A derivation demoted for never adding
    /// the empty clause reports the step count as its position.
    Rejected { step: usize, reason: RejectReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckStats {
    /// Accepted steps.
    pub steps_applied: usize,
    pub at_additions: usize,
    pub qrat_additions: usize,
    pub deletions: usize,
    /// Reductions discharged by the QRATU branch.
    pub qratu_reductions: usize,
    /// Reductions discharged by the configured plain/extended rule.
    pub rule_reductions: usize,
    /// Unit-propagation runs performed by this checker.
    pub propagations: usize,
    /// Literals assigned across all propagation runs.
    pub implied_literals: usize,
    /// Widest clause mentioned by any step.
    pub max_clause_width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Steps consumed: the position of the accepted empty-clause addition, of
    /// the rejected step, or the proof length.
    pub steps_used: usize,
    pub stats: CheckStats,
}

/// Incremental checker: owns the working matrix, applies one step at a time.
pub struct Checker<'a> {
    prefix: &'a Prefix,
    config: CheckerConfig,
    working: Vec<Clause>,
    stats: CheckStats,
    refuted: bool,
}

/// Asserted-tautology check that records propagation effort.
fn counted_at(
    working: &[Clause],
    prefix: &Prefix,
    mode: AtMode,
    stats: &mut CheckStats,
    c: &Clause,
) -> bool {
    if c.is_tautology() {
        return true;
    }
    let seed: Vec<_> = c.iter().map(|l| !l).collect();
    let result = propagate(working, &seed, prefix, mode);
    stats.propagations += 1;
    stats.implied_literals += result.implied.len();
    result.outcome == PropagationOutcome::Conflict
}

impl<'a> Checker<'a> {
    pub fn new(f: &'a QbfFormula, config: CheckerConfig) -> Checker<'a> {
        Checker {
            prefix: f.prefix(),
            config,
            working: f.matrix().to_vec(),
            stats: CheckStats::default(),
            refuted: false,
        }
    }

    /// The current working matrix, in stable order: original clauses (reduced
    /// in place) followed by additions, minus deletions.
    pub fn working(&self) -> &[Clause] {
        &self.working
    }

    pub fn stats(&self) -> &CheckStats {
        &self.stats
    }

    /// Whether an empty-clause addition has been accepted.
    pub fn refuted(&self) -> bool {
        self.refuted
    }

    /// Applies one step; on rejection the working matrix is unchanged.
    pub fn apply(&mut self, step: &QratStep) -> Result<(), RejectReason> {
        for lit in step.clause().iter() {
            if !self.prefix.is_bound(lit.var()) {
                return Err(RejectReason::UnboundVariable(lit.var()));
            }
        }
        self.stats.max_clause_width = self.stats.max_clause_width.max(step.clause().len());
        match step {
            QratStep::Add { clause, pivot } => self.apply_add(clause, *pivot),
            QratStep::Delete { clause } => self.apply_delete(clause),
            QratStep::UReduce { clause, pivot } => self.apply_ureduce(clause, *pivot),
        }?;
        self.stats.steps_applied += 1;
        Ok(())
    }

    fn apply_add(
        &mut self,
        clause: &Clause,
        pivot: Option<crate::formula::Lit>,
    ) -> Result<(), RejectReason> {
        if counted_at(
            &self.working,
            self.prefix,
            self.config.at_mode,
            &mut self.stats,
            clause,
        ) {
            self.stats.at_additions += 1;
        } else if self.config.allow_qrat_additions {
            let pivot = pivot.ok_or(RejectReason::PivotMissing)?;
            if !clause.contains(pivot) {
                return Err(RejectReason::PivotNotInClause(pivot));
            }
            if !self.prefix.is_existential(pivot.var()) || !self.qrat_on(clause, pivot) {
                return Err(RejectReason::NotAtNorQrat);
            }
            self.stats.qrat_additions += 1;
        } else {
            return Err(RejectReason::NotAtNorQrat);
        }
        if clause.is_empty() {
            self.refuted = true;
        }
        self.working.push(clause.clone());
        Ok(())
    }

    fn apply_delete(&mut self, clause: &Clause) -> Result<(), RejectReason> {
        match self.working.iter().position(|d| d == clause) {
            Some(at) => {
                self.working.remove(at);
                self.stats.deletions += 1;
                Ok(())
            }
            None => Err(RejectReason::DeleteNotPresent),
        }
    }

    fn apply_ureduce(
        &mut self,
        clause: &Clause,
        pivot: crate::formula::Lit,
    ) -> Result<(), RejectReason> {
        if !clause.contains(pivot) {
            return Err(RejectReason::PivotNotInClause(pivot));
        }
        if !self.prefix.is_universal(pivot.var()) {
            return Err(RejectReason::PivotNotUniversal(pivot));
        }
        let Some(at) = self.working.iter().position(|d| d == clause) else {
            return Err(RejectReason::UreduceNotPresent);
        };
        if self.qrat_on(clause, pivot) {
            self.stats.qratu_reductions += 1;
        } else if self.rule_admits(clause, pivot) {
            self.stats.rule_reductions += 1;
        } else {
            return Err(RejectReason::UreduceUnjustified);
        }
        self.working[at] = clause.without(pivot);
        Ok(())
    }

    /// QRAT property of `clause` on `pivot` against the working matrix, with
    /// propagation effort counted.
    fn qrat_on(&mut self, clause: &Clause, pivot: crate::formula::Lit) -> bool {
        let remainder = clause.without(pivot);
        let partners: Vec<usize> = (0..self.working.len())
            .filter(|&i| self.working[i].contains(!pivot))
            .collect();
        for i in partners {
            let or = outer_resolvent(self.prefix, &remainder, &self.working[i], pivot)
                .expect("remainder excludes the pivot and the partner has its complement");
            if !counted_at(
                &self.working,
                self.prefix,
                self.config.at_mode,
                &mut self.stats,
                &or,
            ) {
                return false;
            }
        }
        true
    }

    fn rule_admits(&self, clause: &Clause, pivot: crate::formula::Lit) -> bool {
        match self.config.univ_rule {
            UnivRule::Ur => super::ur_admits(self.prefix, clause, pivot),
            UnivRule::Eur => !super::eic_in(&self.working, self.prefix, clause, pivot)
                .expect("pivot validated as universal and in the clause")
                .contains(!pivot),
        }
    }
}

/// Checks a whole proof, stopping at the first accepted empty-clause
/// addition or the first rejected step.
pub fn check_proof(f: &QbfFormula, proof: &QratProof, config: CheckerConfig) -> CheckReport {
    let mut checker = Checker::new(f, config);
    for (i, step) in proof.steps().iter().enumerate() {
        if let Err(reason) = checker.apply(step) {
            return CheckReport {
                verdict: Verdict::Rejected {
                    step: i + 1,
                    reason,
                },
                steps_used: i + 1,
                stats: checker.stats,
            };
        }
        if checker.refuted() {
            return CheckReport {
                verdict: Verdict::VerifiedRefutation,
                steps_used: i + 1,
                stats: checker.stats,
            };
        }
    }
    CheckReport {
        verdict: Verdict::VerifiedDerivation,
        steps_used: proof.len(),
        stats: checker.stats,
    }
}

/// [`check_proof`], demoting a mere derivation to a rejection.
pub fn check_refutation(f: &QbfFormula, proof: &QratProof, config: CheckerConfig) -> CheckReport {
    let mut report = check_proof(f, proof, config);
    if report.verdict == Verdict::VerifiedDerivation {
        report.verdict = Verdict::Rejected {
            step: proof.len(),
            reason: RejectReason::NotARefutation,
        };
    }
    report
}
