//! Proof lines for merge resolution.

use std::collections::BTreeMap;

use crate::formula::{Clause, Var};

use super::map::{LineIndex, MergeMap};

/// How a proof line claims to be derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Copies the existential part of the 1-based input clause.
    Axiom(usize),
    /// Resolves two earlier lines on an existential pivot variable.
    /// `forced_merge` lists universal variables whose maps must be merged
    /// even where select would also apply.
    Resolution {
        a: LineIndex,
        b: LineIndex,
        pivot: Var,
        forced_merge: Vec<Var>,
    },
}

/// One proof line: a purely existential clause plus one merge map per
/// universal variable. Parsed lines start as skeletons; checking fills in
/// the clause and maps from the justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MResLine {
    pub index: LineIndex,
    pub clause: Clause,
    pub maps: BTreeMap<Var, MergeMap>,
    pub justification: Justification,
}

impl MResLine {
    /// A line carrying only its justification.
    pub fn skeleton(index: LineIndex, justification: Justification) -> MResLine {
        MResLine {
            index,
            clause: Clause::empty(),
            maps: BTreeMap::new(),
            justification,
        }
    }
}

/// A sequence of lines with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MResProof {
    lines: Vec<MResLine>,
}

impl MResProof {
    pub fn new(lines: Vec<MResLine>) -> MResProof {
        MResProof { lines }
    }

    pub fn lines(&self) -> &[MResLine] {
        &self.lines
    }

    pub fn lines_mut(&mut self) -> &mut [MResLine] {
        &mut self.lines
    }

    pub fn into_lines(self) -> Vec<MResLine> {
        self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn last(&self) -> Option<&MResLine> {
        self.lines.last()
    }
}

impl From<Vec<MResLine>> for MResProof {
    fn from(lines: Vec<MResLine>) -> MResProof {
        MResProof::new(lines)
    }
}
