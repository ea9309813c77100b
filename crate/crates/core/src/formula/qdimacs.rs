//! QDIMACS reader and writer.
//!
//! Accepted shape: optional `c` comment lines anywhere, one `p cnf <vars>
//! <clauses>` problem line, then `a`/`e` quantifier lines (each terminated by
//! `0`), then clauses (literal lists terminated by `0`, which may span
//! lines). Adjacent blocks under the same quantifier merge silently; binding
//! a variable twice is an error. The strict entry point rejects matrix
//! variables missing from the prefix, the lenient one binds them in an
//! outermost existential block.

use std::fmt;
use std::fmt::Write as _;

use super::{Clause, FormulaError, Lit, Prefix, QbfFormula, Quantifier, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.col, self.msg
        )
    }
}

impl std::error::Error for ParseError {}

/// Parses QDIMACS, rejecting matrix variables not bound by the prefix.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, ParseError> {
    parse(text, false)
}

/// Parses QDIMACS, binding unbound matrix variables in an outermost
/// existential block.
pub fn parse_qdimacs_lenient(text: &str) -> Result<QbfFormula, ParseError> {
    parse(text, true)
}

pub(crate) fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        // Offsets are byte-based; QDIMACS is ASCII so this is the column.
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, tok)
    })
}

struct Parser {
    header: Option<(u32, usize)>,
    prefix: Prefix,
    clauses: Vec<Clause>,
    pending: Vec<Lit>,
    pending_start: (usize, usize),
    in_matrix: bool,
    // Unbound matrix variables in first-occurrence order, with the position
    // of the first occurrence for strict-mode errors.
    unbound: Vec<(Var, usize, usize)>,
}

impl Parser {
    fn header_or_err(&self, line: usize, col: usize) -> Result<(u32, usize), ParseError> {
        self.header
            .ok_or_else(|| ParseError::new(line, col, "expected problem line before this"))
    }

    fn literal(&mut self, n: i32, line: usize, col: usize) -> Result<Lit, ParseError> {
        let (num_vars, _) = self.header_or_err(line, col)?;
        let lit = Lit::from_dimacs(n)
            .map_err(|_| ParseError::new(line, col, "literal out of range"))?;
        if lit.var().id() > num_vars {
            return Err(ParseError::new(
                line,
                col,
                format!(
                    "variable {} exceeds the {} declared in the problem line",
                    lit.var(),
                    num_vars
                ),
            ));
        }
        if !self.prefix.is_bound(lit.var()) && !self.unbound.iter().any(|&(v, _, _)| v == lit.var())
        {
            self.unbound.push((lit.var(), line, col));
        }
        Ok(lit)
    }
}

fn parse(text: &str, lenient: bool) -> Result<QbfFormula, ParseError> {
    let mut st = Parser {
        header: None,
        prefix: Prefix::new(),
        clauses: Vec::new(),
        pending: Vec::new(),
        pending_start: (0, 0),
        in_matrix: false,
        unbound: Vec::new(),
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut toks = tokens(line).peekable();
        let Some(&(col0, first)) = toks.peek() else {
            continue;
        };
        match first {
            _ if first.starts_with('c') && first != "cnf" => continue,
            "p" => {
                if st.header.is_some() {
                    return Err(ParseError::new(lineno, col0, "duplicate problem line"));
                }
                if !st.prefix.blocks().is_empty() {
                    return Err(ParseError::new(
                        lineno,
                        col0,
                        "problem line must precede quantifier lines",
                    ));
                }
                toks.next();
                match toks.next() {
                    Some((_, "cnf")) => {}
                    other => {
                        let col = other.map_or(col0, |(c, _)| c);
                        return Err(ParseError::new(lineno, col, "expected `cnf`"));
                    }
                }
                let mut field = |name: &str| -> Result<(usize, u64), ParseError> {
                    let (col, tok) = toks
                        .next()
                        .ok_or_else(|| ParseError::new(lineno, col0, format!("missing {name}")))?;
                    let n: u64 = tok.parse().map_err(|_| {
                        ParseError::new(lineno, col, format!("invalid {name} `{tok}`"))
                    })?;
                    Ok((col, n))
                };
                let (vcol, num_vars) = field("variable count")?;
                if num_vars > u32::MAX as u64 {
                    return Err(ParseError::new(lineno, vcol, "variable count too large"));
                }
                let (_, num_clauses) = field("clause count")?;
                if let Some((col, tok)) = toks.next() {
                    return Err(ParseError::new(
                        lineno,
                        col,
                        format!("unexpected token `{tok}` after problem line"),
                    ));
                }
                st.header = Some((num_vars as u32, num_clauses as usize));
            }
            "a" | "e" => {
                let (num_vars, _) = st.header_or_err(lineno, col0)?;
                if st.in_matrix || !st.pending.is_empty() {
                    return Err(ParseError::new(
                        lineno,
                        col0,
                        "quantifier line after the first clause",
                    ));
                }
                let q = if first == "e" {
                    Quantifier::Existential
                } else {
                    Quantifier::Universal
                };
                toks.next();
                let mut vars = Vec::new();
                let mut terminated = false;
                for (col, tok) in toks {
                    let n: i64 = tok.parse().map_err(|_| {
                        ParseError::new(lineno, col, format!("invalid variable `{tok}`"))
                    })?;
                    if n == 0 {
                        terminated = true;
                        continue;
                    }
                    if terminated {
                        return Err(ParseError::new(
                            lineno,
                            col,
                            "token after quantifier line terminator",
                        ));
                    }
                    if n < 0 || n > num_vars as i64 {
                        return Err(ParseError::new(
                            lineno,
                            col,
                            format!("variable `{tok}` out of range"),
                        ));
                    }
                    vars.push(Var::new(n as u32).unwrap());
                }
                if !terminated {
                    return Err(ParseError::new(
                        lineno,
                        col0,
                        "quantifier line not terminated by 0",
                    ));
                }
                st.prefix.push_block(q, vars).map_err(|e| match e {
                    FormulaError::DuplicateBinding(v) => ParseError::new(
                        lineno,
                        col0,
                        format!("variable {v} is bound more than once"),
                    ),
                    other => ParseError::new(lineno, col0, other.to_string()),
                })?;
            }
            _ => {
                // Clause literals; a clause ends at 0 and may span lines.
                let (_, num_clauses) = st.header_or_err(lineno, col0)?;
                st.in_matrix = true;
                if st.pending.is_empty() {
                    st.pending_start = (lineno, col0);
                }
                for (col, tok) in toks {
                    let n: i32 = tok.parse().map_err(|_| {
                        ParseError::new(lineno, col, format!("invalid literal `{tok}`"))
                    })?;
                    if n == 0 {
                        if st.clauses.len() == num_clauses {
                            return Err(ParseError::new(
                                lineno,
                                col,
                                format!("more than the declared {num_clauses} clauses"),
                            ));
                        }
                        st.clauses.push(Clause::new(st.pending.drain(..)));
                    } else {
                        if st.pending.is_empty() {
                            st.pending_start = (lineno, col);
                        }
                        let lit = st.literal(n, lineno, col)?;
                        st.pending.push(lit);
                    }
                }
            }
        }
    }

    let Some((_, num_clauses)) = st.header else {
        return Err(ParseError::new(1, 1, "missing problem line"));
    };
    if !st.pending.is_empty() {
        let (line, col) = st.pending_start;
        return Err(ParseError::new(line, col, "clause not terminated by 0"));
    }
    if st.clauses.len() != num_clauses {
        return Err(ParseError::new(
            text.lines().count().max(1),
            1,
            format!(
                "problem line declares {} clauses but {} were given",
                num_clauses,
                st.clauses.len()
            ),
        ));
    }

    let prefix = if st.unbound.is_empty() {
        st.prefix
    } else if lenient {
        let mut p = Prefix::new();
        p.push_block(
            Quantifier::Existential,
            st.unbound.iter().map(|&(v, _, _)| v),
        )
        .expect("unbound variables are distinct and not yet bound");
        for block in st.prefix.blocks() {
            p.push_block(block.quantifier, block.variables.iter().copied())
                .expect("rebinding a previously valid prefix");
        }
        p
    } else {
        let (v, line, col) = st.unbound[0];
        return Err(ParseError::new(
            line,
            col,
            format!("variable {v} is not bound by the prefix"),
        ));
    };

    QbfFormula::new(prefix, st.clauses)
        .map_err(|e| ParseError::new(1, 1, format!("invalid formula: {e}")))
}

/// Serializes a formula in QDIMACS. The output is deterministic: clauses keep
/// matrix order, literals are in clause normal form, blocks keep prefix order.
pub fn write_qdimacs(f: &QbfFormula) -> String {
    let mut out = String::new();
    let num_vars = f.max_var().map_or(0, Var::id);
    writeln!(out, "p cnf {} {}", num_vars, f.num_clauses()).unwrap();
    for block in f.prefix().blocks() {
        write!(out, "{}", block.quantifier).unwrap();
        for v in &block.variables {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for clause in f.matrix() {
        writeln!(out, "{clause}").unwrap();
    }
    out
}
