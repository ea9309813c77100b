//! Toolkit for quantified Boolean formulas in prenex CNF: QDIMACS i/o, a
//! brute-force semantic oracle, unit propagation, a QRAT proof checker, a
//! merge-resolution (MRes) proof checker, a translation from MRes refutations
//! into QRAT refutations, and a generator for the squared-equality family.

pub mod formula;
pub mod mres;
pub mod qrat;
pub mod semantics;
pub mod squaredeq;
pub mod translate;
pub mod unitprop;

pub use formula::{
    existential_subclause, parse_qdimacs, parse_qdimacs_lenient, write_qdimacs, Clause, Lit,
    Prefix, QbfFormula, Quantifier, Var,
};
pub use semantics::{brute_force_truth, evaluate, verify_countermodel, Assignment};
pub use squaredeq::{emit_eq2_refutation, generate_eq2, Eq2Error, Eq2Instance, Eq2Label};
pub use translate::{translate, TranslateError};
pub use unitprop::{is_at, propagate, AtMode};
