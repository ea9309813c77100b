//! Unit propagation with two-watched literals, in two flavours: plain
//! propositional propagation, and a universal-aware variant in which
//! universal literals never propagate and cannot rescue a clause.

use std::collections::VecDeque;

use crate::formula::{Clause, Lit, Prefix, QbfFormula};

/// How asserted-tautology checks treat universal literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AtMode {
    /// Quantifiers are ignored; every literal propagates.
    #[default]
    Propositional,
    /// Universal literals never become units. A clause with every existential
    /// literal falsified and no satisfied literal is a conflict even when
    /// universal literals remain unassigned.
    UniversalAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// Propagation reached a fixpoint without falsifying a clause.
    Fixpoint,
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationResult {
    pub outcome: PropagationOutcome,
    /// Literals assigned by propagation (seed literals excluded), in
    /// assignment order.
    pub implied: Vec<Lit>,
    /// Index of the falsified clause. `None` on a fixpoint, and also when the
    /// seed itself contains a complementary pair.
    pub conflict_clause: Option<usize>,
}

impl PropagationResult {
    pub fn is_conflict(&self) -> bool {
        self.outcome == PropagationOutcome::Conflict
    }

    fn fixpoint(implied: Vec<Lit>) -> PropagationResult {
        PropagationResult {
            outcome: PropagationOutcome::Fixpoint,
            implied,
            conflict_clause: None,
        }
    }

    fn conflict(implied: Vec<Lit>, clause: Option<usize>) -> PropagationResult {
        PropagationResult {
            outcome: PropagationOutcome::Conflict,
            implied,
            conflict_clause: clause,
        }
    }
}

/// Runs unit propagation on `clauses` from the `seed` assignment to a
/// fixpoint or a conflict, in a single pass (no backtracking).
///
/// In [`AtMode::UniversalAware`], universal variables are assigned by the
/// seed only; variables not bound by `prefix` are treated as existential.
pub fn propagate(
    clauses: &[Clause],
    seed: &[Lit],
    prefix: &Prefix,
    mode: AtMode,
) -> PropagationResult {
    let max_id = clauses
        .iter()
        .filter_map(|c| c.max_var())
        .chain(seed.iter().map(|l| l.var()))
        .chain(prefix.max_var())
        .map(|v| v.index())
        .max()
        .unwrap_or(0);

    // Truth values indexed by variable, watch lists indexed by literal code.
    let mut values: Vec<Option<bool>> = vec![None; max_id + 1];
    let mut watches: Vec<Vec<usize>> = vec![Vec::new(); 2 * (max_id + 1)];
    let mut watched: Vec<[Lit; 2]> = Vec::with_capacity(clauses.len());
    let mut queue: VecDeque<Lit> = VecDeque::new();
    let mut implied: Vec<Lit> = Vec::new();

    let value_of = |values: &[Option<bool>], l: Lit| -> Option<bool> {
        values[l.var().index()].map(|v| v == l.is_positive())
    };

    for &lit in seed {
        match value_of(&values, lit) {
            Some(true) => {}
            Some(false) => return PropagationResult::conflict(implied, None),
            None => values[lit.var().index()] = Some(lit.is_positive()),
        }
    }

    let watchable = |values: &[Option<bool>], l: Lit| -> bool {
        if mode == AtMode::UniversalAware && prefix.is_universal(l.var()) {
            return false;
        }
        value_of(values, l) != Some(false)
    };

    // Build watches. Clauses already satisfied are dropped for good: values
    // are never retracted, so a true literal stays true. Clauses left with a
    // single watchable literal are units; with none, conflicts.
    let placeholder = Lit::from_dimacs(1).expect("nonzero");
    for (index, clause) in clauses.iter().enumerate() {
        watched.push([placeholder; 2]);
        if clause.iter().any(|l| value_of(&values, l) == Some(true)) {
            continue;
        }
        let mut picks = clause.iter().filter(|&l| watchable(&values, l));
        match (picks.next(), picks.next()) {
            (Some(w0), Some(w1)) => {
                watched[index] = [w0, w1];
                watches[w0.code()].push(index);
                watches[w1.code()].push(index);
            }
            (Some(unit), None) => {
                values[unit.var().index()] = Some(unit.is_positive());
                implied.push(unit);
                queue.push_back(unit);
            }
            (None, _) => return PropagationResult::conflict(implied, Some(index)),
        }
    }

    while let Some(assigned) = queue.pop_front() {
        let falsified = !assigned;
        let watchers = std::mem::take(&mut watches[falsified.code()]);
        let mut still_watching = Vec::with_capacity(watchers.len());
        for &index in &watchers {
            let [w0, w1] = watched[index];
            let other = if w0 == falsified { w1 } else { w0 };
            if value_of(&values, other) == Some(true) {
                still_watching.push(index);
                continue;
            }
            let replacement = clauses[index]
                .iter()
                .find(|&l| l != other && l != falsified && watchable(&values, l));
            match replacement {
                Some(r) => {
                    watched[index] = [other, r];
                    watches[r.code()].push(index);
                }
                None => match value_of(&values, other) {
                    Some(false) => return PropagationResult::conflict(implied, Some(index)),
                    _ => {
                        values[other.var().index()] = Some(other.is_positive());
                        implied.push(other);
                        queue.push_back(other);
                        still_watching.push(index);
                    }
                },
            }
        }
        watches[falsified.code()] = still_watching;
    }

    PropagationResult::fixpoint(implied)
}

/// Asserted tautology: propagating the complements of `c`'s literals over the
/// matrix of `f` yields a conflict. Tautological clauses qualify immediately.
pub fn is_at(c: &Clause, f: &QbfFormula, mode: AtMode) -> bool {
    is_at_in(c, f.matrix(), f.prefix(), mode)
}

/// [`is_at`] against an explicit clause list, for checkers that maintain a
/// working matrix.
pub fn is_at_in(c: &Clause, clauses: &[Clause], prefix: &Prefix, mode: AtMode) -> bool {
    if c.is_tautology() {
        return true;
    }
    let seed: Vec<Lit> = c.iter().map(|l| !l).collect();
    propagate(clauses, &seed, prefix, mode).is_conflict()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_qdimacs;

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n).unwrap()
    }

    fn clauses(spec: &[&[i32]]) -> Vec<Clause> {
        spec.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect()
    }

    fn lits(spec: &[i32]) -> Vec<Lit> {
        spec.iter().map(|&n| lit(n)).collect()
    }

    /// e 1 2 3, a 4 5.
    fn prefix() -> Prefix {
        parse_qdimacs("p cnf 5 1\ne 1 2 3 0\na 4 5 0\n1 0\n")
            .unwrap()
            .into_parts()
            .0
    }

    #[test]
    fn empty_input_is_a_fixpoint() {
        let r = propagate(&[], &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
        assert!(r.implied.is_empty());
    }

    #[test]
    fn empty_clause_is_an_immediate_conflict() {
        let cs = vec![Clause::empty()];
        let r = propagate(&cs, &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);
        assert_eq!(r.conflict_clause, Some(0));
    }

    #[test]
    fn contradictory_seed_conflicts_without_a_clause() {
        let cs = clauses(&[&[1, 2]]);
        let r = propagate(&cs, &lits(&[1, -1]), &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);
        assert_eq!(r.conflict_clause, None);
        assert!(r.implied.is_empty());

        // A repeated seed literal is harmless.
        let r = propagate(&cs, &lits(&[1, 1]), &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
    }

    #[test]
    fn unit_then_conflict() {
        // (1) forces 1; (-1 2) forces 2; seed -2 contradicts.
        let cs = clauses(&[&[1], &[-1, 2]]);
        let r = propagate(&cs, &lits(&[-2]), &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);
        assert_eq!(r.conflict_clause, Some(1));
        assert_eq!(r.implied, lits(&[1]));
    }

    #[test]
    fn propagation_chain_through_the_watch_lists() {
        // Binary clauses build watches first; the unit at the end drives the
        // queue through them.
        let cs = clauses(&[&[-1, 2], &[-2, 3], &[1]]);
        let r = propagate(&cs, &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
        assert_eq!(r.implied, lits(&[1, 2, 3]));
    }

    #[test]
    fn watches_move_before_the_clause_becomes_unit() {
        let cs = clauses(&[&[1, 2, 3], &[-1], &[-2]]);
        let r = propagate(&cs, &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
        assert_eq!(r.implied, lits(&[-1, -2, 3]));

        let cs = clauses(&[&[1, 2, 3], &[-1], &[-2], &[-3]]);
        let r = propagate(&cs, &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);
        assert_eq!(r.conflict_clause, Some(0));
    }

    #[test]
    fn satisfied_clauses_are_ignored() {
        let cs = clauses(&[&[1, 2], &[1]]);
        let r = propagate(&cs, &lits(&[1]), &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
        assert!(r.implied.is_empty());
    }

    #[test]
    fn universal_literal_propagates_only_propositionally() {
        // e 1, a 4: clause (1 4) with 1 falsified.
        let cs = clauses(&[&[1, 4]]);
        let seed = lits(&[-1]);
        let prop = propagate(&cs, &seed, &prefix(), AtMode::Propositional);
        assert_eq!(prop.outcome, PropagationOutcome::Fixpoint);
        assert_eq!(prop.implied, lits(&[4]));

        let univ = propagate(&cs, &seed, &prefix(), AtMode::UniversalAware);
        assert_eq!(univ.outcome, PropagationOutcome::Conflict);
        assert_eq!(univ.conflict_clause, Some(0));
        assert!(univ.implied.is_empty());
    }

    #[test]
    fn universal_literals_cannot_rescue_a_clause() {
        // (4 1 2) with both existential literals falsified in turn.
        let cs = clauses(&[&[4, 1, 2]]);
        let r = propagate(&cs, &lits(&[-1, -2]), &prefix(), AtMode::UniversalAware);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);

        let r = propagate(&cs, &lits(&[-1]), &prefix(), AtMode::UniversalAware);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
        assert_eq!(r.implied, lits(&[2]), "the remaining existential is unit");
    }

    #[test]
    fn pure_universal_clause_conflicts_unless_seed_satisfied() {
        let cs = clauses(&[&[4, 5]]);
        let r = propagate(&cs, &[], &prefix(), AtMode::UniversalAware);
        assert_eq!(r.outcome, PropagationOutcome::Conflict);
        assert_eq!(r.conflict_clause, Some(0));

        let r = propagate(&cs, &lits(&[5]), &prefix(), AtMode::UniversalAware);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);

        let r = propagate(&cs, &[], &prefix(), AtMode::Propositional);
        assert_eq!(r.outcome, PropagationOutcome::Fixpoint);
    }

    #[test]
    fn is_at_spec_cases() {
        // (y) is asserted w.r.t. { (x), (-x y) }: negating y conflicts.
        let f = parse_qdimacs("p cnf 2 2\ne 1 2 0\n1 0\n-1 2 0\n").unwrap();
        let y = Clause::from_dimacs(&[2]).unwrap();
        assert!(is_at(&y, &f, AtMode::Propositional));
        assert!(is_at(&y, &f, AtMode::UniversalAware));

        let x = Clause::from_dimacs(&[1]).unwrap();
        assert!(is_at(&x, &f, AtMode::Propositional));

        // Nothing forces (2) on its own.
        let g = parse_qdimacs("p cnf 2 1\ne 1 2 0\n1 0\n").unwrap();
        assert!(!is_at(&y, &g, AtMode::Propositional));
    }

    #[test]
    fn tautologies_are_asserted_by_definition() {
        let g = parse_qdimacs("p cnf 1 0\ne 1 0\n").unwrap();
        let t = Clause::from_dimacs(&[1, -1]).unwrap();
        assert!(is_at(&t, &g, AtMode::Propositional));
        assert!(is_at(&t, &g, AtMode::UniversalAware));
    }

    #[test]
    fn at_modes_diverge_on_universal_rescues() {
        // a 1, e 2: matrix (1 2), (-1 -2). The clause (2) is asserted only
        // in the universal-aware sense.
        let f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n").unwrap();
        let c = Clause::from_dimacs(&[2]).unwrap();
        assert!(!is_at(&c, &f, AtMode::Propositional));
        assert!(is_at(&c, &f, AtMode::UniversalAware));
    }

    #[test]
    fn propositional_conflicts_persist_in_universal_mode() {
        let f = parse_qdimacs("p cnf 3 3\ne 1 2 0\na 3 0\n1 0\n-1 2 0\n-2 3 0\n").unwrap();
        let c = Clause::from_dimacs(&[-3]).unwrap();
        // Propositionally: seed 3; units 1, 2; then (-2 3) is satisfied by 3.
        assert!(!is_at(&c, &f, AtMode::Propositional));
        // Universally aware: 3 is seeded true, so (-2 3) is satisfied too.
        assert!(!is_at(&c, &f, AtMode::UniversalAware));

        let d = Clause::from_dimacs(&[2]).unwrap();
        assert!(is_at(&d, &f, AtMode::Propositional));
        assert!(is_at(&d, &f, AtMode::UniversalAware));
    }
}
