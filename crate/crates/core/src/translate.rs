//! Compiles a verified merge-resolution refutation into a sequence of QRAT
//! clause additions over the same formula.

use std::fmt;

use crate::formula::QbfFormula;
use crate::mres::{self, MResProof, MResVerdict};
use crate::qrat::{QratProof, QratStep};

/// The input proof did not check out as a refutation.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslateError {
    pub verdict: MResVerdict,
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            MResVerdict::Rejected { step, reason } => {
                write!(f, "input proof rejected at step {step}: {reason}")
            }
            _ => write!(f, "input proof is not a refutation"),
        }
    }
}

impl std::error::Error for TranslateError {}

/// Emits one addition per input line: the existential part of the source
/// clause for axioms, the resolvent for resolutions. The last addition is
/// the empty clause, so the result is a refutation under universal-aware
/// propagation — no deletion or reduction steps are needed.
pub fn translate(f: &QbfFormula, proof: &MResProof) -> Result<QratProof, TranslateError> {
    let report = mres::check_refutation(f, proof);
    if report.verdict != MResVerdict::VerifiedRefutation {
        return Err(TranslateError {
            verdict: report.verdict,
        });
    }
    let steps = report
        .elaborated
        .lines()
        .iter()
        .map(|line| QratStep::add(line.clause.clone()))
        .collect();
    Ok(QratProof::new(steps))
}
