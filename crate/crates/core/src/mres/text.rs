//! Line-oriented trace format for merge-resolution proofs.
//!
//! An optional `p mres <formula-reference>` header, then one proof line per
//! text line: `<index> a <input-clause-number>` for axioms or
//! `<index> r <a> <b> <pivot-variable> [m <uvar>...]` for resolutions, where
//! the trailing `m` list forces merging for those universal variables.
//! Input clauses are numbered from 1 in matrix order. `c` starts a comment.

use std::str::FromStr;

use crate::formula::{tokens, ParseError, Var};

use super::map::LineIndex;
use super::proof::{Justification, MResLine, MResProof};

fn number<T: FromStr>(lineno: usize, col: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(lineno, col, format!("invalid {what} `{tok}`")))
}

pub fn parse_mres(input: &str) -> Result<MResProof, ParseError> {
    let mut lines: Vec<MResLine> = Vec::new();
    let mut seen_header = false;
    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let mut toks = tokens(raw).peekable();
        let Some(&(col0, first)) = toks.peek() else {
            continue;
        };
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if seen_header || !lines.is_empty() {
                return Err(ParseError::new(lineno, col0, "misplaced header"));
            }
            toks.next();
            match toks.next() {
                Some((_, "mres")) => {}
                Some((col, other)) => {
                    return Err(ParseError::new(
                        lineno,
                        col,
                        format!("expected `mres`, found `{other}`"),
                    ));
                }
                None => return Err(ParseError::new(lineno, col0, "expected `mres` after `p`")),
            }
            // The rest of the header names the formula; it carries no data.
            seen_header = true;
            continue;
        }

        toks.next();
        let index: LineIndex = number(lineno, col0, first, "line index")?;
        if index == 0 {
            return Err(ParseError::new(lineno, col0, "line index must be positive"));
        }
        if lines.last().is_some_and(|prev| index <= prev.index) {
            return Err(ParseError::new(lineno, col0, "line index must increase"));
        }
        let Some((kcol, kind)) = toks.next() else {
            return Err(ParseError::new(lineno, col0, "expected `a` or `r` after the index"));
        };
        let justification = match kind {
            "a" => {
                let Some((col, tok)) = toks.next() else {
                    return Err(ParseError::new(lineno, kcol, "expected an input clause number"));
                };
                let k: usize = number(lineno, col, tok, "input clause number")?;
                if k == 0 {
                    return Err(ParseError::new(lineno, col, "input clauses are numbered from 1"));
                }
                Justification::Axiom(k)
            }
            "r" => {
                let mut reference = |what: &str| -> Result<LineIndex, ParseError> {
                    let Some((col, tok)) = toks.next() else {
                        return Err(ParseError::new(lineno, kcol, format!("expected {what}")));
                    };
                    let r: LineIndex = number(lineno, col, tok, what)?;
                    if r >= index {
                        return Err(ParseError::new(
                            lineno,
                            col,
                            format!("{what} {r} does not precede line {index}"),
                        ));
                    }
                    Ok(r)
                };
                let a = reference("first premise index")?;
                let b = reference("second premise index")?;
                let Some((col, tok)) = toks.next() else {
                    return Err(ParseError::new(lineno, kcol, "expected a pivot variable"));
                };
                let pivot_id: u32 = number(lineno, col, tok, "pivot variable")?;
                let Some(pivot) = Var::new(pivot_id).ok() else {
                    return Err(ParseError::new(lineno, col, "pivot variable must be positive"));
                };
                let mut forced_merge = Vec::new();
                if let Some((mcol, marker)) = toks.next() {
                    if marker != "m" {
                        return Err(ParseError::new(
                            lineno,
                            mcol,
                            format!("unexpected token `{marker}`"),
                        ));
                    }
                    for (col, tok) in toks.by_ref() {
                        let id: u32 = number(lineno, col, tok, "forced-merge variable")?;
                        let Some(v) = Var::new(id).ok() else {
                            return Err(ParseError::new(
                                lineno,
                                col,
                                "forced-merge variable must be positive",
                            ));
                        };
                        forced_merge.push(v);
                    }
                    if forced_merge.is_empty() {
                        return Err(ParseError::new(
                            lineno,
                            mcol,
                            "`m` needs at least one variable",
                        ));
                    }
                }
                Justification::Resolution {
                    a,
                    b,
                    pivot,
                    forced_merge,
                }
            }
            other => {
                return Err(ParseError::new(
                    lineno,
                    kcol,
                    format!("expected `a` or `r`, found `{other}`"),
                ));
            }
        };
        if let Some((col, tok)) = toks.next() {
            return Err(ParseError::new(lineno, col, format!("unexpected token `{tok}`")));
        }
        lines.push(MResLine::skeleton(index, justification));
    }
    Ok(MResProof::new(lines))
}

pub fn write_mres(proof: &MResProof) -> String {
    let mut out = String::from("p mres -\n");
    for line in proof.lines() {
        match &line.justification {
            Justification::Axiom(k) => {
                out.push_str(&format!("{} a {}\n", line.index, k));
            }
            Justification::Resolution {
                a,
                b,
                pivot,
                forced_merge,
            } => {
                out.push_str(&format!("{} r {} {} {}", line.index, a, b, pivot));
                if !forced_merge.is_empty() {
                    out.push_str(" m");
                    for v in forced_merge {
                        out.push_str(&format!(" {v}"));
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}
