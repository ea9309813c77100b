//! Core syntax: variables, literals, clauses, quantifier prefixes, and
//! closed prenex-CNF formulas.

mod qdimacs;

pub(crate) use qdimacs::tokens;
pub use qdimacs::{parse_qdimacs, parse_qdimacs_lenient, write_qdimacs, ParseError};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable ids must be positive")]
    ZeroVariable,
    #[error("variable {0} is bound more than once")]
    DuplicateBinding(Var),
    #[error("variable {0} occurs in the matrix but is not bound by the prefix")]
    UnboundVariable(Var),
}

/// A propositional variable, identified by a positive integer as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Result<Var, FormulaError> {
        if id == 0 {
            Err(FormulaError::ZeroVariable)
        } else {
            Ok(Var(id))
        }
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Index usable for dense per-variable tables.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal: a variable together with a sign. Encoded as `var << 1 | neg`
/// so that the natural order is by variable, positive phase first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | u32::from(!positive))
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn complement(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// Index usable for dense per-literal tables (watch lists).
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_dimacs(n: i32) -> Result<Lit, FormulaError> {
        if n == 0 {
            return Err(FormulaError::ZeroVariable);
        }
        let var = Var::new(n.unsigned_abs())?;
        Ok(Lit::new(var, n > 0))
    }

    pub fn to_dimacs(self) -> i32 {
        let id = self.var().0 as i32;
        if self.is_positive() {
            id
        } else {
            -id
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        self.complement()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause in normal form: literals sorted by variable id (positive phase
/// first) with duplicates removed. Equality is therefore set equality.
/// A clause may contain both phases of a variable; see [`Clause::is_tautology`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn from_dimacs(ints: &[i32]) -> Result<Clause, FormulaError> {
        let lits = ints
            .iter()
            .map(|&n| Lit::from_dimacs(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Clause::new(lits))
    }

    pub fn literals(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True if some variable occurs in both phases.
    pub fn is_tautology(&self) -> bool {
        self.lits
            .windows(2)
            .any(|w| w[0].var() == w[1].var() && w[0] != w[1])
    }

    /// The clause with one literal removed (no-op if absent).
    pub fn without(&self, lit: Lit) -> Clause {
        Clause {
            lits: self.lits.iter().copied().filter(|&l| l != lit).collect(),
        }
    }

    pub fn union(&self, other: &Clause) -> Clause {
        Clause::new(self.lits.iter().chain(other.lits.iter()).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.last().map(|l| l.var())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.lits {
            write!(f, "{} ", lit)?;
        }
        write!(f, "0")
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Clause {
        Clause::new(iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Existential,
    Universal,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Existential => Quantifier::Universal,
            Quantifier::Universal => Quantifier::Existential,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Existential => write!(f, "e"),
            Quantifier::Universal => write!(f, "a"),
        }
    }
}

/// One quantifier block: a maximal run of variables under the same quantifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub quantifier: Quantifier,
    pub variables: Vec<Var>,
}

/// A quantifier prefix: alternating blocks, each variable bound at most once.
/// The level of a variable is the 1-based index of its block; literals compare
/// left-to-right by level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Prefix {
    blocks: Vec<Block>,
    // Dense map var index -> (level, quantifier); None = unbound.
    info: Vec<Option<(u32, Quantifier)>>,
}

impl Prefix {
    pub fn new() -> Prefix {
        Prefix::default()
    }

    /// Appends variables under `q`. Merges into the last block when the
    /// quantifier matches, so blocks always alternate.
    pub fn push_block(
        &mut self,
        q: Quantifier,
        vars: impl IntoIterator<Item = Var>,
    ) -> Result<(), FormulaError> {
        let vars: Vec<Var> = vars.into_iter().collect();
        if vars.is_empty() {
            return Ok(());
        }
        let merge = matches!(self.blocks.last(), Some(b) if b.quantifier == q);
        let level = if merge {
            self.blocks.len() as u32
        } else {
            self.blocks.len() as u32 + 1
        };
        for &v in &vars {
            let slot = v.index();
            if slot >= self.info.len() {
                self.info.resize(slot + 1, None);
            }
            if self.info[slot].is_some() {
                return Err(FormulaError::DuplicateBinding(v));
            }
            self.info[slot] = Some((level, q));
        }
        if merge {
            self.blocks.last_mut().unwrap().variables.extend(vars);
        } else {
            self.blocks.push(Block {
                quantifier: q,
                variables: vars,
            });
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn level(&self, v: Var) -> Option<u32> {
        self.info.get(v.index()).copied().flatten().map(|(l, _)| l)
    }

    pub fn quantifier(&self, v: Var) -> Option<Quantifier> {
        self.info.get(v.index()).copied().flatten().map(|(_, q)| q)
    }

    pub fn is_bound(&self, v: Var) -> bool {
        self.quantifier(v).is_some()
    }

    pub fn is_existential(&self, v: Var) -> bool {
        self.quantifier(v) == Some(Quantifier::Existential)
    }

    pub fn is_universal(&self, v: Var) -> bool {
        self.quantifier(v) == Some(Quantifier::Universal)
    }

    /// `a` is at or to the left of `b` (level comparison).
    pub fn left_of_or_at(&self, a: Var, b: Var) -> bool {
        match (self.level(a), self.level(b)) {
            (Some(la), Some(lb)) => la <= lb,
            _ => false,
        }
    }

    /// `a` is strictly to the left of `b`.
    pub fn left_of(&self, a: Var, b: Var) -> bool {
        match (self.level(a), self.level(b)) {
            (Some(la), Some(lb)) => la < lb,
            _ => false,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        self.blocks.iter().flat_map(|b| b.variables.iter().copied())
    }

    pub fn existential_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.blocks
            .iter()
            .filter(|b| b.quantifier == Quantifier::Existential)
            .flat_map(|b| b.variables.iter().copied())
    }

    pub fn universal_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.blocks
            .iter()
            .filter(|b| b.quantifier == Quantifier::Universal)
            .flat_map(|b| b.variables.iter().copied())
    }

    pub fn num_bound(&self) -> usize {
        self.blocks.iter().map(|b| b.variables.len()).sum()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.variables().max()
    }
}

/// A closed prenex-CNF formula: every matrix variable is bound by the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfFormula {
    prefix: Prefix,
    matrix: Vec<Clause>,
}

impl QbfFormula {
    pub fn new(prefix: Prefix, matrix: Vec<Clause>) -> Result<QbfFormula, FormulaError> {
        for clause in &matrix {
            for lit in clause.iter() {
                if !prefix.is_bound(lit.var()) {
                    return Err(FormulaError::UnboundVariable(lit.var()));
                }
            }
        }
        Ok(QbfFormula { prefix, matrix })
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    pub fn num_clauses(&self) -> usize {
        self.matrix.len()
    }

    /// Largest variable id mentioned anywhere (prefix or matrix).
    pub fn max_var(&self) -> Option<Var> {
        let m = self.matrix.iter().filter_map(|c| c.max_var()).max();
        self.prefix.max_var().max(m)
    }

    pub fn into_parts(self) -> (Prefix, Vec<Clause>) {
        (self.prefix, self.matrix)
    }
}

/// The sub-clause of existential literals of `c`. Universal literals are
/// dropped; every variable must be bound by `p`.
pub fn existential_subclause(c: &Clause, p: &Prefix) -> Result<Clause, FormulaError> {
    let mut lits = Vec::with_capacity(c.len());
    for lit in c.iter() {
        match p.quantifier(lit.var()) {
            Some(Quantifier::Existential) => lits.push(lit),
            Some(Quantifier::Universal) => {}
            None => return Err(FormulaError::UnboundVariable(lit.var())),
        }
    }
    Ok(Clause::new(lits))
}
