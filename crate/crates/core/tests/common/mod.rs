//! Shared helpers for integration tests: a deliberately naive propagation
//! oracle whose visit order is an explicit parameter, and seeded random
//! formula generators.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::{BTreeMap, BTreeSet};

use qproof::formula::{Clause, Lit, Prefix, QbfFormula, Quantifier, Var};
use qproof::unitprop::AtMode;
use rand::seq::SliceRandom;
use rand::Rng;

/// Outcome of the oracle: `None` for a conflict, otherwise the set of
/// literals implied beyond the seed.
pub fn naive_propagate(
    clauses: &[Clause],
    seed: &[Lit],
    prefix: &Prefix,
    mode: AtMode,
    rng: &mut impl Rng,
) -> Option<BTreeSet<Lit>> {
    let mut values: BTreeMap<Var, bool> = BTreeMap::new();
    for &l in seed {
        match values.get(&l.var()) {
            Some(&v) if v != l.is_positive() => return None,
            _ => {
                values.insert(l.var(), l.is_positive());
            }
        }
    }
    let mut implied = BTreeSet::new();
    loop {
        let mut units: Vec<Lit> = Vec::new();
        for c in clauses {
            let satisfied = c
                .iter()
                .any(|l| values.get(&l.var()) == Some(&l.is_positive()));
            if satisfied {
                continue;
            }
            let assignable: Vec<Lit> = c
                .iter()
                .filter(|l| !values.contains_key(&l.var()))
                .filter(|l| match mode {
                    AtMode::Propositional => true,
                    AtMode::UniversalAware => !prefix.is_universal(l.var()),
                })
                .collect();
            match assignable.len() {
                0 => return None,
                1 => units.push(assignable[0]),
                _ => {}
            }
        }
        if units.is_empty() {
            return Some(implied);
        }
        // The probed order: assign one unit chosen at random, then rescan.
        let &l = units.choose(rng).unwrap();
        values.insert(l.var(), l.is_positive());
        implied.insert(l);
    }
}

/// A random closed prenex formula with alternating blocks.
pub fn random_formula(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> QbfFormula {
    let num_vars = rng.gen_range(1..=max_vars);
    let mut prefix = Prefix::new();
    let mut quantifier = if rng.gen() {
        Quantifier::Existential
    } else {
        Quantifier::Universal
    };
    let mut next = 1u32;
    while next <= num_vars {
        let take = rng.gen_range(1..=num_vars - next + 1);
        prefix
            .push_block(quantifier, (next..next + take).map(|i| Var::new(i).unwrap()))
            .unwrap();
        next += take;
        quantifier = quantifier.dual();
    }
    let num_clauses = rng.gen_range(1..=max_clauses);
    let mut matrix = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        matrix.push(random_clause(rng, num_vars));
    }
    QbfFormula::new(prefix, matrix).unwrap()
}

pub fn random_clause(rng: &mut impl Rng, num_vars: u32) -> Clause {
    let width = rng.gen_range(1..=4u32.min(num_vars)) as usize;
    Clause::new((0..width).map(|_| {
        let v = Var::new(rng.gen_range(1..=num_vars)).unwrap();
        Lit::new(v, rng.gen())
    }))
}

/// A random seed of distinct-variable literals.
pub fn random_seed(rng: &mut impl Rng, num_vars: u32) -> Vec<Lit> {
    let count = rng.gen_range(0..=num_vars.min(3));
    let mut vars: Vec<u32> = (1..=num_vars).collect();
    vars.shuffle(rng);
    vars.truncate(count as usize);
    vars.into_iter()
        .map(|id| Lit::new(Var::new(id).unwrap(), rng.gen()))
        .collect()
}
