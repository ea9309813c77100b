//! Ground-truth semantics at desk scale: clause evaluation under total
//! assignments, a brute-force game-tree oracle for formula truth, and
//! verification of universal winning strategies (countermodels).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Clause, Lit, QbfFormula, Quantifier, Var};
use crate::mres::MergeMap;

/// Cap on bound variables for the brute-force oracle.
pub const DEFAULT_VAR_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("assignment leaves variable {0} undefined")]
    PartialAssignment(Var),
    #[error("{count} variables exceed the brute-force cap of {cap}")]
    VariableCapExceeded { count: usize, cap: usize },
    #[error("no decision for universal variable {0}")]
    MissingDecision(Var),
    #[error("decision for {u} reads {read}, which is not to its left")]
    StrategyReadsRight { u: Var, read: Var },
    #[error("decision for {u} reads {read}, which is not existential")]
    StrategyReadsNonExistential { u: Var, read: Var },
    #[error("decision for {u} failed to evaluate: {reason}")]
    StrategyEvaluation { u: Var, reason: String },
}

/// A (possibly partial) assignment of truth values to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        if var.index() >= self.values.len() {
            self.values.resize(var.index() + 1, None);
        }
        self.values[var.index()] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        if var.index() < self.values.len() {
            self.values[var.index()] = None;
        }
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.index()).copied().flatten()
    }

    /// Makes the literal true.
    pub fn assign_lit(&mut self, lit: Lit) {
        self.set(lit.var(), lit.is_positive());
    }

    /// Truth value of the literal, if its variable is assigned.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.is_positive())
    }
}

fn clause_value(clause: &Clause, a: &Assignment) -> Result<bool, SemanticsError> {
    for lit in clause.iter() {
        match a.lit_value(lit) {
            Some(true) => return Ok(true),
            Some(false) => {}
            None => return Err(SemanticsError::PartialAssignment(lit.var())),
        }
    }
    Ok(false)
}

/// Truth of the matrix under a total assignment: every clause must have a
/// satisfied literal. Errors if a matrix variable is unassigned.
pub fn evaluate(f: &QbfFormula, a: &Assignment) -> Result<bool, SemanticsError> {
    for clause in f.matrix() {
        if !clause_value(clause, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix status under a partial assignment, used to prune the game tree.
enum MatrixStatus {
    True,
    False,
    Open,
}

fn matrix_status(matrix: &[Clause], a: &Assignment) -> MatrixStatus {
    let mut all_satisfied = true;
    for clause in matrix {
        let mut satisfied = false;
        let mut open = false;
        for lit in clause.iter() {
            match a.lit_value(lit) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => open = true,
            }
        }
        if satisfied {
            continue;
        }
        if !open {
            return MatrixStatus::False;
        }
        all_satisfied = false;
    }
    if all_satisfied {
        MatrixStatus::True
    } else {
        MatrixStatus::Open
    }
}

fn game_value(f: &QbfFormula, order: &[(Var, Quantifier)], at: usize, a: &mut Assignment) -> bool {
    match matrix_status(f.matrix(), a) {
        MatrixStatus::True => return true,
        MatrixStatus::False => return false,
        MatrixStatus::Open => {}
    }
    debug_assert!(at < order.len(), "open matrix with all variables assigned");
    let (var, q) = order[at];
    for value in [false, true] {
        a.set(var, value);
        let sub = game_value(f, order, at + 1, a);
        a.unset(var);
        match q {
            Quantifier::Existential if sub => return true,
            Quantifier::Universal if !sub => return false,
            _ => {}
        }
    }
    matches!(q, Quantifier::Universal)
}

/// Brute-force truth of a closed prenex formula by recursion over the prefix
/// (existential blocks choose, universal blocks must survive both values),
/// capped at [`DEFAULT_VAR_CAP`] bound variables.
pub fn brute_force_truth(f: &QbfFormula) -> Result<bool, SemanticsError> {
    brute_force_truth_capped(f, DEFAULT_VAR_CAP)
}

pub fn brute_force_truth_capped(f: &QbfFormula, cap: usize) -> Result<bool, SemanticsError> {
    let count = f.prefix().num_bound();
    if count > cap {
        return Err(SemanticsError::VariableCapExceeded { count, cap });
    }
    let order: Vec<(Var, Quantifier)> = f
        .prefix()
        .blocks()
        .iter()
        .flat_map(|b| b.variables.iter().map(move |&v| (v, b.quantifier)))
        .collect();
    let mut a = Assignment::new();
    Ok(game_value(f, &order, 0, &mut a))
}

/// Output of one universal decision: a value for the variable, or
/// "don't care" (resolved to `false` when a concrete value is needed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyValue {
    Assign(bool),
    DontCare,
}

impl StrategyValue {
    pub fn concrete(self) -> bool {
        match self {
            StrategyValue::Assign(v) => v,
            StrategyValue::DontCare => false,
        }
    }
}

/// A decision function for one universal variable, reading only existential
/// variables to its left.
#[derive(Debug, Clone)]
pub enum Decision {
    /// A line-indexed branching program, as reconstructed by the MRes checker.
    Map(MergeMap),
    /// An explicit truth table over `inputs`; `outputs` is indexed by the
    /// little-endian bit pattern of the input values.
    Table {
        inputs: Vec<Var>,
        outputs: Vec<StrategyValue>,
    },
}

impl Decision {
    pub fn constant(value: StrategyValue) -> Decision {
        Decision::Table {
            inputs: Vec::new(),
            outputs: vec![value],
        }
    }

    /// The decision `u := v`.
    pub fn follow(v: Var) -> Decision {
        Decision::Table {
            inputs: vec![v],
            outputs: vec![StrategyValue::Assign(false), StrategyValue::Assign(true)],
        }
    }

    fn inputs(&self) -> Vec<Var> {
        match self {
            Decision::Map(m) => m.branch_vars(),
            Decision::Table { inputs, .. } => inputs.clone(),
        }
    }

    fn decide(&self, a: &Assignment) -> Result<StrategyValue, String> {
        match self {
            Decision::Map(m) => m.evaluate(a).map_err(|e| e.to_string()),
            Decision::Table { inputs, outputs } => {
                let mut idx = 0usize;
                for (bit, &v) in inputs.iter().enumerate() {
                    match a.get(v) {
                        Some(true) => idx |= 1 << bit,
                        Some(false) => {}
                        None => return Err(format!("input variable {v} is unassigned")),
                    }
                }
                outputs
                    .get(idx)
                    .copied()
                    .ok_or_else(|| "truth table is too short for its inputs".to_string())
            }
        }
    }
}

/// One decision per universal variable.
#[derive(Debug, Clone, Default)]
pub struct UniversalStrategy {
    decisions: BTreeMap<Var, Decision>,
}

impl UniversalStrategy {
    pub fn new() -> UniversalStrategy {
        UniversalStrategy::default()
    }

    pub fn insert(&mut self, u: Var, d: Decision) {
        self.decisions.insert(u, d);
    }

    pub fn get(&self, u: Var) -> Option<&Decision> {
        self.decisions.get(&u)
    }

    pub fn decisions(&self) -> impl Iterator<Item = (Var, &Decision)> {
        self.decisions.iter().map(|(&u, d)| (u, d))
    }
}

/// Checks that `s` is a winning strategy for the universal player: for every
/// total existential assignment, playing the strategy's values falsifies the
/// matrix. Strategies that read a universal variable or a variable not to the
/// left of the one being decided are contract violations (errors), which are
/// distinct from the `Ok(false)` "not a countermodel" outcome.
pub fn verify_countermodel(
    f: &QbfFormula,
    s: &UniversalStrategy,
) -> Result<bool, SemanticsError> {
    verify_countermodel_capped(f, s, DEFAULT_VAR_CAP)
}

pub fn verify_countermodel_capped(
    f: &QbfFormula,
    s: &UniversalStrategy,
    cap: usize,
) -> Result<bool, SemanticsError> {
    let prefix = f.prefix();
    let existentials: Vec<Var> = prefix.existential_vars().collect();
    if existentials.len() > cap {
        return Err(SemanticsError::VariableCapExceeded {
            count: existentials.len(),
            cap,
        });
    }
    let universals: Vec<Var> = prefix.universal_vars().collect();
    for &u in &universals {
        let d = s.get(u).ok_or(SemanticsError::MissingDecision(u))?;
        for read in d.inputs() {
            if !prefix.is_existential(read) {
                return Err(SemanticsError::StrategyReadsNonExistential { u, read });
            }
            if !prefix.left_of_or_at(read, u) {
                return Err(SemanticsError::StrategyReadsRight { u, read });
            }
        }
    }

    let n = existentials.len();
    debug_assert!(n < usize::BITS as usize);
    let mut a = Assignment::new();
    for pattern in 0..(1usize << n) {
        for (bit, &v) in existentials.iter().enumerate() {
            a.set(v, pattern >> bit & 1 == 1);
        }
        for &u in &universals {
            let d = s.get(u).expect("checked above");
            let value = d
                .decide(&a)
                .map_err(|reason| SemanticsError::StrategyEvaluation { u, reason })?;
            a.set(u, value.concrete());
        }
        if evaluate(f, &a)? {
            return Ok(false);
        }
    }
    Ok(true)
}
