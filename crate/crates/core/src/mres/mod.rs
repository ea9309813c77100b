//! Merge resolution: proofs whose lines carry partial strategies for the
//! universal variables, checked line by line.

pub mod map;

mod checker;
mod proof;
mod text;

pub use checker::{
    check_proof, check_refutation, extract_strategy, verify_elaborated, MResReject, MResReport,
    MResStats, MResVerdict,
};
pub use map::{is_consistent, is_isomorphic, merge, select, LineIndex, MapError, MapRule, MergeMap};
pub use proof::{Justification, MResLine, MResProof};
pub use text::{parse_mres, write_mres};
