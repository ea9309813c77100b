//! Line-oriented text format for QRAT proofs.
//!
//! One step per line, each terminated by `0`. Plain lines add a clause whose
//! pivot is the first literal as written; `d` lines delete, `u` lines reduce
//! on the leading universal literal. Lines starting with `c` are comments.

use crate::formula::{tokens, Clause, Lit, ParseError};

use super::{QratProof, QratStep};

enum Kind {
    Add,
    Delete,
    Reduce,
}

pub fn parse_qrat(input: &str) -> Result<QratProof, ParseError> {
    let mut steps = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let mut toks = tokens(raw).peekable();
        let Some(&(col0, first)) = toks.peek() else {
            continue;
        };
        if first.starts_with('c') {
            continue;
        }
        let kind = match first {
            "d" => {
                toks.next();
                Kind::Delete
            }
            "u" => {
                toks.next();
                Kind::Reduce
            }
            _ => Kind::Add,
        };
        let mut lits: Vec<Lit> = Vec::new();
        let mut terminated = false;
        let mut last_col = col0;
        for (col, tok) in toks {
            last_col = col;
            if terminated {
                return Err(ParseError::new(
                    lineno,
                    col,
                    format!("unexpected token `{tok}` after terminating 0"),
                ));
            }
            let value: i32 = tok.parse().map_err(|_| {
                ParseError::new(lineno, col, format!("invalid literal `{tok}`"))
            })?;
            if value == 0 {
                terminated = true;
                continue;
            }
            lits.push(
                Lit::from_dimacs(value)
                    .map_err(|_| ParseError::new(lineno, col, "literal out of range"))?,
            );
        }
        if !terminated {
            return Err(ParseError::new(lineno, last_col, "step not terminated by 0"));
        }
        let clause: Clause = lits.iter().copied().collect();
        match kind {
            Kind::Add => steps.push(QratStep::Add {
                clause,
                pivot: lits.first().copied(),
            }),
            Kind::Delete => steps.push(QratStep::delete(clause)),
            Kind::Reduce => {
                let Some(&pivot) = lits.first() else {
                    return Err(ParseError::new(lineno, col0, "reduction has no pivot literal"));
                };
                steps.push(QratStep::UReduce { clause, pivot });
            }
        }
    }
    Ok(QratProof::new(steps))
}

pub fn write_qrat(proof: &QratProof) -> String {
    let mut out = String::new();
    for step in proof.steps() {
        out.push_str(&step.to_string());
        out.push('\n');
    }
    out
}
