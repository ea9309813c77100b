//! Line-by-line reconstruction and checking of merge-resolution proofs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{existential_subclause, Lit, Prefix, QbfFormula, Var};
use crate::semantics::{Decision, UniversalStrategy};

use super::map::{self, LineIndex, MapError, MergeMap};
use super::proof::{Justification, MResLine, MResProof};

/// Why a line was rejected. `code()` is the stable machine-readable form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MResReject {
    /// Line indices must be strictly increasing.
    LineOrderViolation,
    DanglingLineReference(LineIndex),
    DanglingInputReference(usize),
    /// The referenced input clause contains a universal variable in both
    /// polarities, so no single assignment falsifies its universal part.
    AxiomUniversalTautology(Var),
    PivotNotExistential(Var),
    /// The pivot does not occur with opposite polarities in the premises.
    PivotAbsent(Var),
    ForcedMergeNotUniversal(Var),
    /// Merging on `pivot` requires it left of the universal variable.
    MergeLevelViolation { pivot: Var, universal: Var },
    InconsistentMerge { universal: Var, at: LineIndex },
    /// Neither select nor merge is applicable for this universal variable.
    NoMapRuleApplies(Var),
    ClauseMismatch,
    MapMismatch(Var),
    UniversalLiteralInClause(Lit),
    NotARefutation,
}

impl MResReject {
    pub fn code(&self) -> &'static str {
        match self {
            MResReject::LineOrderViolation => "line-order-violation",
            MResReject::DanglingLineReference(_) => "dangling-line-reference",
            MResReject::DanglingInputReference(_) => "dangling-input-reference",
            MResReject::AxiomUniversalTautology(_) => "axiom-universal-tautology",
            MResReject::PivotNotExistential(_) => "pivot-not-existential",
            MResReject::PivotAbsent(_) => "pivot-absent",
            MResReject::ForcedMergeNotUniversal(_) => "forced-merge-not-universal",
            MResReject::MergeLevelViolation { .. } => "merge-level-violation",
            MResReject::InconsistentMerge { .. } => "inconsistent-merge",
            MResReject::NoMapRuleApplies(_) => "no-map-rule-applies",
            MResReject::ClauseMismatch => "clause-mismatch",
            MResReject::MapMismatch(_) => "map-mismatch",
            MResReject::UniversalLiteralInClause(_) => "universal-literal-in-clause",
            MResReject::NotARefutation => "not-a-refutation",
        }
    }
}

impl fmt::Display for MResReject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MResReject::LineOrderViolation => write!(f, "line index does not increase"),
            MResReject::DanglingLineReference(i) => write!(f, "no earlier line has index {i}"),
            MResReject::DanglingInputReference(k) => write!(f, "no input clause numbered {k}"),
            MResReject::AxiomUniversalTautology(v) => {
                write!(f, "input clause is tautological in universal variable {v}")
            }
            MResReject::PivotNotExistential(v) => write!(f, "pivot {v} is not existential"),
            MResReject::PivotAbsent(v) => {
                write!(f, "pivot {v} does not oppose itself across the premises")
            }
            MResReject::ForcedMergeNotUniversal(v) => {
                write!(f, "forced-merge variable {v} is not universal")
            }
            MResReject::MergeLevelViolation { pivot, universal } => {
                write!(f, "merge on {pivot} requires it left of universal {universal}")
            }
            MResReject::InconsistentMerge { universal, at } => {
                write!(f, "maps for {universal} disagree at index {at}")
            }
            MResReject::NoMapRuleApplies(v) => {
                write!(f, "neither select nor merge applies for universal {v}")
            }
            MResReject::ClauseMismatch => write!(f, "stored clause differs from the derived one"),
            MResReject::MapMismatch(v) => {
                write!(f, "stored map for {v} differs from the derived one")
            }
            MResReject::UniversalLiteralInClause(l) => {
                write!(f, "stored clause contains non-existential literal {l}")
            }
            MResReject::NotARefutation => write!(f, "final clause is not empty"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MResVerdict {
    VerifiedRefutation,
    VerifiedDerivation,
    /// Rejected at the 1-based `step` position in the line sequence.
    Rejected { step: usize, reason: MResReject },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MResStats {
    pub axioms: usize,
    pub resolutions: usize,
    /// Map combinations discharged by select, across all universal variables.
    pub selects: usize,
    /// Map combinations discharged by merge, across all universal variables.
    pub merges: usize,
    pub max_clause_width: usize,
}

#[derive(Debug, Clone)]
pub struct MResReport {
    pub verdict: MResVerdict,
    /// Lint messages for accepted but suspicious lines.
    pub warnings: Vec<String>,
    pub stats: MResStats,
    /// Lines accepted so far, with clause and maps reconstructed.
    pub elaborated: MResProof,
}

/// Reconstructs every line from its justification and accepts iff all rules
/// apply. Stored clause and map content is ignored; see [`verify_elaborated`].
pub fn check_proof(f: &QbfFormula, proof: &MResProof) -> MResReport {
    run(f, proof, false)
}

/// [`check_proof`], demoting a mere derivation to a rejection.
pub fn check_refutation(f: &QbfFormula, proof: &MResProof) -> MResReport {
    let mut report = run(f, proof, false);
    if report.verdict == MResVerdict::VerifiedDerivation {
        report.verdict = MResVerdict::Rejected {
            step: proof.len(),
            reason: MResReject::NotARefutation,
        };
    }
    report
}

/// [`check_proof`] that additionally requires each stored clause and map to
/// equal the reconstructed one.
pub fn verify_elaborated(f: &QbfFormula, proof: &MResProof) -> MResReport {
    run(f, proof, true)
}

/// The final line's maps, as a strategy for the universal player. Call on the
/// elaborated proof of a verified refutation.
pub fn extract_strategy(proof: &MResProof) -> Result<UniversalStrategy, MResReject> {
    let last = proof.last().ok_or(MResReject::NotARefutation)?;
    if !last.clause.is_empty() {
        return Err(MResReject::NotARefutation);
    }
    let mut strategy = UniversalStrategy::new();
    for (&u, m) in &last.maps {
        strategy.insert(u, Decision::Map(m.clone()));
    }
    Ok(strategy)
}

fn run(f: &QbfFormula, proof: &MResProof, compare: bool) -> MResReport {
    let prefix = f.prefix();
    let universals: Vec<Var> = prefix.universal_vars().collect();
    let mut warnings = Vec::new();
    let mut stats = MResStats::default();
    let mut accepted: Vec<MResLine> = Vec::new();
    let mut by_index: BTreeMap<LineIndex, usize> = BTreeMap::new();

    for (pos, line) in proof.lines().iter().enumerate() {
        let step = pos + 1;
        let reject = move |reason| MResReport {
            verdict: MResVerdict::Rejected { step, reason },
            warnings: Vec::new(),
            stats,
            elaborated: MResProof::new(Vec::new()),
        };

        if accepted.last().is_some_and(|prev| line.index <= prev.index) {
            return reject(MResReject::LineOrderViolation);
        }

        let (clause, maps) = match &line.justification {
            Justification::Axiom(k) => {
                let Some(input) = k.checked_sub(1).and_then(|i| f.matrix().get(i)) else {
                    return reject(MResReject::DanglingInputReference(*k));
                };
                let mut maps = BTreeMap::new();
                for &u in &universals {
                    let pos_lit = Lit::positive(u);
                    let neg_lit = Lit::negative(u);
                    let label = match (input.contains(pos_lit), input.contains(neg_lit)) {
                        (true, true) => return reject(MResReject::AxiomUniversalTautology(u)),
                        (true, false) => crate::semantics::StrategyValue::Assign(false),
                        (false, true) => crate::semantics::StrategyValue::Assign(true),
                        (false, false) => crate::semantics::StrategyValue::DontCare,
                    };
                    maps.insert(u, MergeMap::leaf(u, line.index, label));
                }
                let clause = existential_subclause(input, prefix)
                    .expect("input clauses are fully bound");
                stats.axioms += 1;
                (clause, maps)
            }
            Justification::Resolution {
                a,
                b,
                pivot,
                forced_merge,
            } => {
                let Some(&pa) = by_index.get(a) else {
                    return reject(MResReject::DanglingLineReference(*a));
                };
                let Some(&pb) = by_index.get(b) else {
                    return reject(MResReject::DanglingLineReference(*b));
                };
                if !prefix.is_existential(*pivot) {
                    return reject(MResReject::PivotNotExistential(*pivot));
                }
                let pos_lit = Lit::positive(*pivot);
                let neg_lit = Lit::negative(*pivot);
                // Orientation: the premise holding the positive pivot comes first.
                let (first, second) = (&accepted[pa], &accepted[pb]);
                let (first, second) =
                    if first.clause.contains(pos_lit) && second.clause.contains(neg_lit) {
                        (first, second)
                    } else if second.clause.contains(pos_lit) && first.clause.contains(neg_lit) {
                        (second, first)
                    } else {
                        return reject(MResReject::PivotAbsent(*pivot));
                    };
                let clause = first
                    .clause
                    .without(pos_lit)
                    .union(&second.clause.without(neg_lit));
                if clause.is_tautology() {
                    warnings.push(format!("line {}: tautological resolvent", line.index));
                }
                let mut forced = BTreeSet::new();
                for &v in forced_merge {
                    if !prefix.is_universal(v) {
                        return reject(MResReject::ForcedMergeNotUniversal(v));
                    }
                    forced.insert(v);
                }
                let mut maps = BTreeMap::new();
                for &u in &universals {
                    let m1 = &first.maps[&u];
                    let m2 = &second.maps[&u];
                    let combined = if forced.contains(&u) {
                        match build_merge(prefix, m1, m2, line.index, *pivot, u) {
                            Ok(m) => {
                                stats.merges += 1;
                                m
                            }
                            Err(reason) => return reject(reason),
                        }
                    } else if let Ok(m) = map::select(m1, m2) {
                        stats.selects += 1;
                        m
                    } else if prefix.left_of(*pivot, u) && map::is_consistent(m1, m2) {
                        match build_merge(prefix, m1, m2, line.index, *pivot, u) {
                            Ok(m) => {
                                stats.merges += 1;
                                m
                            }
                            Err(reason) => return reject(reason),
                        }
                    } else {
                        return reject(MResReject::NoMapRuleApplies(u));
                    };
                    assert!(
                        combined
                            .branch_vars()
                            .iter()
                            .all(|&x| prefix.is_existential(x) && prefix.left_of_or_at(x, u)),
                        "map for {u} reads a variable not existential-left of it"
                    );
                    maps.insert(u, combined);
                }
                stats.resolutions += 1;
                (clause, maps)
            }
        };

        stats.max_clause_width = stats.max_clause_width.max(clause.len());

        if compare {
            if let Some(l) = line.clause.iter().find(|l| !prefix.is_existential(l.var())) {
                return reject(MResReject::UniversalLiteralInClause(l));
            }
            if line.clause != clause {
                return reject(MResReject::ClauseMismatch);
            }
            if line.maps != maps {
                let culprit = universals
                    .iter()
                    .copied()
                    .find(|u| line.maps.get(u) != maps.get(u))
                    .unwrap_or_else(|| *line.maps.keys().next().expect("maps differ"));
                return reject(MResReject::MapMismatch(culprit));
            }
        }

        by_index.insert(line.index, accepted.len());
        accepted.push(MResLine {
            index: line.index,
            clause,
            maps,
            justification: line.justification.clone(),
        });
    }

    let verdict = match accepted.last() {
        Some(last) if last.clause.is_empty() => MResVerdict::VerifiedRefutation,
        _ => MResVerdict::VerifiedDerivation,
    };
    MResReport {
        verdict,
        warnings,
        stats,
        elaborated: MResProof::new(accepted),
    }
}

/// Merge with checker-level error mapping; counts nothing (callers do).
fn build_merge(
    prefix: &Prefix,
    m1: &MergeMap,
    m2: &MergeMap,
    index: LineIndex,
    pivot: Var,
    u: Var,
) -> Result<MergeMap, MResReject> {
    if !prefix.left_of(pivot, u) {
        return Err(MResReject::MergeLevelViolation { pivot, universal: u });
    }
    match map::merge(m1, m2, index, pivot) {
        Ok(m) => Ok(m),
        Err(MapError::Inconsistent(at)) => Err(MResReject::InconsistentMerge { universal: u, at }),
        Err(other) => unreachable!("index ordering guarantees freshness: {other}"),
    }
}
