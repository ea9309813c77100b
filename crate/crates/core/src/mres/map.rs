//! Merge maps: line-indexed deterministic branching programs that record, for
//! one universal variable, the assignment a refutation forces on it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::formula::Var;
use crate::semantics::{Assignment, StrategyValue};

/// Node indices are proof line indices.
pub type LineIndex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("maps are neither isomorphic nor is either trivial")]
    SelectUndefined,
    #[error("maps disagree on shared index {0}")]
    Inconsistent(LineIndex),
    #[error("new root index {index} is not larger than every existing index")]
    IndexNotFresh { index: LineIndex },
    #[error("node {0} has no rule")]
    MissingRule(LineIndex),
    #[error("node {parent} points at {child}, which is not a smaller index")]
    ChildNotSmaller { parent: LineIndex, child: LineIndex },
    #[error("branch variable {0} is unassigned")]
    UnassignedBranchVariable(Var),
}

/// One node: a labelled leaf or a two-way branch on an existential variable.
/// `Branch { on, low, high }` reads "if `on` is false go to `low`, else to
/// `high`"; both children have strictly smaller indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapRule {
    Leaf(StrategyValue),
    Branch {
        on: Var,
        low: LineIndex,
        high: LineIndex,
    },
}

/// A merge map for universal variable `var`: a rule table plus a root index.
/// Maps built by the checker satisfy the child-index ordering, which makes
/// the rule graph acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeMap {
    var: Var,
    root: LineIndex,
    rules: BTreeMap<LineIndex, MapRule>,
}

impl MergeMap {
    pub fn new(
        var: Var,
        root: LineIndex,
        rules: BTreeMap<LineIndex, MapRule>,
    ) -> Result<MergeMap, MapError> {
        let m = MergeMap { var, root, rules };
        m.validate()?;
        Ok(m)
    }

    /// A single leaf at `index`.
    pub fn leaf(var: Var, index: LineIndex, label: StrategyValue) -> MergeMap {
        let mut rules = BTreeMap::new();
        rules.insert(index, MapRule::Leaf(label));
        MergeMap {
            var,
            root: index,
            rules,
        }
    }

    /// The trivial map: a single don't-care leaf.
    pub fn trivial(var: Var, index: LineIndex) -> MergeMap {
        MergeMap::leaf(var, index, StrategyValue::DontCare)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn root(&self) -> LineIndex {
        self.root
    }

    pub fn rules(&self) -> &BTreeMap<LineIndex, MapRule> {
        &self.rules
    }

    pub fn rule(&self, index: LineIndex) -> Option<MapRule> {
        self.rules.get(&index).copied()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// A map is trivial when it is a single don't-care leaf.
    pub fn is_trivial(&self) -> bool {
        self.rules.len() == 1
            && matches!(
                self.rule(self.root),
                Some(MapRule::Leaf(StrategyValue::DontCare))
            )
    }

    pub fn max_index(&self) -> LineIndex {
        self.rules.keys().next_back().copied().unwrap_or(0)
    }

    /// Variables appearing in branch rules.
    pub fn branch_vars(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .rules
            .values()
            .filter_map(|r| match r {
                MapRule::Branch { on, .. } => Some(*on),
                MapRule::Leaf(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Structural sanity: the root has a rule, every branch child has a rule
    /// and a strictly smaller index than its parent.
    pub fn validate(&self) -> Result<(), MapError> {
        if !self.rules.contains_key(&self.root) {
            return Err(MapError::MissingRule(self.root));
        }
        for (&index, rule) in &self.rules {
            if let MapRule::Branch { low, high, .. } = *rule {
                for child in [low, high] {
                    if child >= index {
                        return Err(MapError::ChildNotSmaller {
                            parent: index,
                            child,
                        });
                    }
                    if !self.rules.contains_key(&child) {
                        return Err(MapError::MissingRule(child));
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs the branching program under `a`, starting at the root.
    pub fn evaluate(&self, a: &Assignment) -> Result<StrategyValue, MapError> {
        let mut at = self.root;
        loop {
            match self.rule(at).ok_or(MapError::MissingRule(at))? {
                MapRule::Leaf(label) => return Ok(label),
                MapRule::Branch { on, low, high } => {
                    let value = a
                        .get(on)
                        .ok_or(MapError::UnassignedBranchVariable(on))?;
                    let next = if value { high } else { low };
                    if next >= at {
                        return Err(MapError::ChildNotSmaller {
                            parent: at,
                            child: next,
                        });
                    }
                    at = next;
                }
            }
        }
    }
}

impl fmt::Display for MergeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (&index, rule)) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match *rule {
                MapRule::Leaf(StrategyValue::Assign(true)) => write!(f, "{index} -> {}", self.var)?,
                MapRule::Leaf(StrategyValue::Assign(false)) => {
                    write!(f, "{index} -> -{}", self.var)?
                }
                MapRule::Leaf(StrategyValue::DontCare) => write!(f, "{index} -> *")?,
                MapRule::Branch { on, low, high } => {
                    write!(f, "{index} -> ({on}, {low}, {high})")?
                }
            }
        }
        write!(f, "}} root {}", self.root)
    }
}

/// Graph isomorphism from the roots: a bijection on reachable indices that
/// preserves leaf labels, branch variables, and edge direction. Memoized on
/// index pairs, so the cost is linear in map size.
pub fn is_isomorphic(m1: &MergeMap, m2: &MergeMap) -> bool {
    let mut fwd: HashMap<LineIndex, LineIndex> = HashMap::new();
    let mut bwd: HashMap<LineIndex, LineIndex> = HashMap::new();
    let mut stack = vec![(m1.root, m2.root)];
    let mut seen: HashSet<(LineIndex, LineIndex)> = HashSet::new();
    while let Some((a, b)) = stack.pop() {
        match (fwd.get(&a), bwd.get(&b)) {
            (Some(&mapped), _) if mapped != b => return false,
            (_, Some(&mapped)) if mapped != a => return false,
            _ => {}
        }
        fwd.insert(a, b);
        bwd.insert(b, a);
        if !seen.insert((a, b)) {
            continue;
        }
        match (m1.rule(a), m2.rule(b)) {
            (Some(MapRule::Leaf(l1)), Some(MapRule::Leaf(l2))) => {
                if l1 != l2 {
                    return false;
                }
            }
            (
                Some(MapRule::Branch {
                    on: x1,
                    low: lo1,
                    high: hi1,
                }),
                Some(MapRule::Branch {
                    on: x2,
                    low: lo2,
                    high: hi2,
                }),
            ) => {
                if x1 != x2 {
                    return false;
                }
                stack.push((lo1, lo2));
                stack.push((hi1, hi2));
            }
            _ => return false,
        }
    }
    true
}

/// Rule-table consistency: every index present in both maps carries the
/// identical rule.
pub fn is_consistent(m1: &MergeMap, m2: &MergeMap) -> bool {
    let (small, large) = if m1.len() <= m2.len() {
        (m1, m2)
    } else {
        (m2, m1)
    };
    small
        .rules()
        .iter()
        .all(|(index, rule)| match large.rule(*index) {
            Some(other) => other == *rule,
            None => true,
        })
}

/// Chooses between two maps proved interchangeable: defined when the maps are
/// isomorphic or at least one is trivial; yields `m1` unless `m1` is trivial.
pub fn select(m1: &MergeMap, m2: &MergeMap) -> Result<MergeMap, MapError> {
    if !(m1.is_trivial() || m2.is_trivial() || is_isomorphic(m1, m2)) {
        return Err(MapError::SelectUndefined);
    }
    if m1.is_trivial() {
        Ok(m2.clone())
    } else {
        Ok(m1.clone())
    }
}

/// Combines two consistent maps under a new root `n -> (x, root1, root2)`.
/// `n` must be strictly larger than every index in either map.
pub fn merge(
    m1: &MergeMap,
    m2: &MergeMap,
    n: LineIndex,
    x: Var,
) -> Result<MergeMap, MapError> {
    if let Some(clash) = first_disagreement(m1, m2) {
        return Err(MapError::Inconsistent(clash));
    }
    if n <= m1.max_index() || n <= m2.max_index() {
        return Err(MapError::IndexNotFresh { index: n });
    }
    let mut rules = m1.rules.clone();
    for (&index, &rule) in m2.rules() {
        rules.insert(index, rule);
    }
    rules.insert(
        n,
        MapRule::Branch {
            on: x,
            low: m1.root,
            high: m2.root,
        },
    );
    Ok(MergeMap {
        var: m1.var,
        root: n,
        rules,
    })
}

fn first_disagreement(m1: &MergeMap, m2: &MergeMap) -> Option<LineIndex> {
    let (small, large) = if m1.len() <= m2.len() {
        (m1, m2)
    } else {
        (m2, m1)
    };
    small
        .rules()
        .iter()
        .find(|(index, rule)| matches!(large.rule(**index), Some(other) if other != **rule))
        .map(|(&index, _)| index)
}
