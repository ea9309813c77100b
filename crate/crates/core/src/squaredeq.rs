//! The squared-equality family: false QBFs whose refutations need the
//! universal player to copy 2n existential choices, plus an emitter for the
//! quadratic-size refutation built from reductions and resolvent additions.

use std::fmt;

use crate::formula::{Clause, Lit, Prefix, QbfFormula, Quantifier, Var};
use crate::qrat::{QratProof, QratStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq2Error {
    /// `n` must be at least 1.
    Zero,
    /// The variable numbering would overflow.
    TooLarge,
}

impl fmt::Display for Eq2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eq2Error::Zero => write!(f, "n must be at least 1"),
            Eq2Error::TooLarge => write!(f, "n is too large to number the variables"),
        }
    }
}

impl std::error::Error for Eq2Error {}

/// Which role a matrix clause plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq2Label {
    /// One of the four sign patterns tying `u_i` to `x_i` and `v_j` to `y_j`:
    /// {±x_i, ±y_j, ±u_i, ±v_j, t_{i,j}} with matching signs.
    Quad {
        i: u32,
        j: u32,
        x_negated: bool,
        y_negated: bool,
    },
    /// The single wide clause (¬t_{1,1} ∨ … ∨ ¬t_{n,n}).
    Final,
}

/// An instance of the family together with its variable numbering.
#[derive(Debug, Clone)]
pub struct Eq2Instance {
    n: u32,
    formula: QbfFormula,
}

/// The four (x, y) sign patterns in matrix order.
const PATTERNS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

impl Eq2Instance {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn formula(&self) -> &QbfFormula {
        &self.formula
    }

    pub fn into_formula(self) -> QbfFormula {
        self.formula
    }

    pub fn x(&self, i: u32) -> Var {
        debug_assert!(1 <= i && i <= self.n);
        Var::new(i).unwrap()
    }

    pub fn y(&self, j: u32) -> Var {
        debug_assert!(1 <= j && j <= self.n);
        Var::new(self.n + j).unwrap()
    }

    pub fn u(&self, i: u32) -> Var {
        debug_assert!(1 <= i && i <= self.n);
        Var::new(2 * self.n + i).unwrap()
    }

    pub fn v(&self, j: u32) -> Var {
        debug_assert!(1 <= j && j <= self.n);
        Var::new(3 * self.n + j).unwrap()
    }

    pub fn t(&self, i: u32, j: u32) -> Var {
        debug_assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        Var::new(4 * self.n + (i - 1) * self.n + j).unwrap()
    }

    /// Position of a sign-pattern clause in the matrix.
    pub fn quad_index(&self, i: u32, j: u32, x_negated: bool, y_negated: bool) -> usize {
        let n = self.n as usize;
        let group = (i as usize - 1) * n + (j as usize - 1);
        4 * group + 2 * (x_negated as usize) + (y_negated as usize)
    }

    pub fn label(&self, clause_index: usize) -> Option<Eq2Label> {
        let n = self.n as usize;
        if clause_index == 4 * n * n {
            return Some(Eq2Label::Final);
        }
        if clause_index > 4 * n * n {
            return None;
        }
        let group = clause_index / 4;
        let pattern = PATTERNS[clause_index % 4];
        Some(Eq2Label::Quad {
            i: (group / n) as u32 + 1,
            j: (group % n) as u32 + 1,
            x_negated: pattern.0,
            y_negated: pattern.1,
        })
    }
}

/// Builds the instance for a given `n`: prefix ∃{x, y} ∀{u, v} ∃{t}, then
/// four sign-pattern clauses per pair (i, j) followed by the wide final
/// clause — 4n² + 1 clauses over 4n + n² variables.
pub fn generate_eq2(n: u32) -> Result<Eq2Instance, Eq2Error> {
    if n == 0 {
        return Err(Eq2Error::Zero);
    }
    let total = 4 * n as u64 + (n as u64) * (n as u64);
    if total > (u32::MAX >> 1) as u64 {
        return Err(Eq2Error::TooLarge);
    }

    let vars = |lo: u32, hi: u32| (lo..=hi).map(|id| Var::new(id).unwrap());
    let mut prefix = Prefix::new();
    prefix
        .push_block(Quantifier::Existential, vars(1, 2 * n))
        .unwrap();
    prefix
        .push_block(Quantifier::Universal, vars(2 * n + 1, 4 * n))
        .unwrap();
    prefix
        .push_block(Quantifier::Existential, vars(4 * n + 1, 4 * n + n * n))
        .unwrap();

    // Accessors need an instance; number the variables directly here.
    let x = |i: u32| Var::new(i).unwrap();
    let y = |j: u32| Var::new(n + j).unwrap();
    let u = |i: u32| Var::new(2 * n + i).unwrap();
    let v = |j: u32| Var::new(3 * n + j).unwrap();
    let t = |i: u32, j: u32| Var::new(4 * n + (i - 1) * n + j).unwrap();

    let mut matrix = Vec::with_capacity(4 * (n as usize) * (n as usize) + 1);
    for i in 1..=n {
        for j in 1..=n {
            for (nx, ny) in PATTERNS {
                matrix.push(Clause::new([
                    Lit::new(x(i), !nx),
                    Lit::new(y(j), !ny),
                    Lit::new(u(i), !nx),
                    Lit::new(v(j), !ny),
                    Lit::new(t(i, j), true),
                ]));
            }
        }
    }
    matrix.push(Clause::new(
        (1..=n).flat_map(|i| (1..=n).map(move |j| Lit::new(t(i, j), false))),
    ));

    let formula = QbfFormula::new(prefix, matrix).expect("all variables are bound by the prefix");
    Ok(Eq2Instance { n, formula })
}

/// Emits the 12n²-step refutation: first drop the u- then v-literal of each
/// sign-pattern clause (8n² reduction lines, each carried by a tautological
/// or vacuous partner check), then per pair (i, j) add {x_i, t_{i,j}},
/// {¬x_i, t_{i,j}} and the unit {t_{i,j}} (3n² additions), then add the
/// successively shorter suffixes of the final clause down to the empty
/// clause (n² additions).
pub fn emit_eq2_refutation(n: u32) -> Result<QratProof, Eq2Error> {
    let inst = generate_eq2(n)?;
    let mut steps = Vec::with_capacity(12 * (n as usize) * (n as usize));

    for i in 1..=n {
        for j in 1..=n {
            for (nx, ny) in PATTERNS {
                let u_lit = Lit::new(inst.u(i), !nx);
                let v_lit = Lit::new(inst.v(j), !ny);
                let full = Clause::new([
                    Lit::new(inst.x(i), !nx),
                    Lit::new(inst.y(j), !ny),
                    u_lit,
                    v_lit,
                    Lit::new(inst.t(i, j), true),
                ]);
                steps.push(QratStep::ureduce(full.clone(), u_lit));
                steps.push(QratStep::ureduce(full.without(u_lit), v_lit));
            }
        }
    }

    for i in 1..=n {
        for j in 1..=n {
            let t_lit = Lit::new(inst.t(i, j), true);
            steps.push(QratStep::add(Clause::new([
                Lit::new(inst.x(i), true),
                t_lit,
            ])));
            steps.push(QratStep::add(Clause::new([
                Lit::new(inst.x(i), false),
                t_lit,
            ])));
            steps.push(QratStep::add(Clause::new([t_lit])));
        }
    }

    let inst = &inst;
    let wide: Vec<Lit> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| Lit::new(inst.t(i, j), false)))
        .collect();
    for k in 1..=wide.len() {
        steps.push(QratStep::add(Clause::new(wide[k..].iter().copied())));
    }

    Ok(QratProof::new(steps))
}
