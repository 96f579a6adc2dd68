//! The `.pgs` text format and DOT output.
//!
//! ```text
//! # the 2-chain with min
//! n 2
//! g 1
//! op 0
//! 0 0
//! 0 1
//! leq
//! 1 1
//! 0 1
//! ```
//!
//! `op γ` starts table `γ`; its `n` rows are indexed by the left operand and
//! its columns by the right operand. `leq` starts the order matrix: row `a`,
//! column `b` is `1` iff `a ≤ b`. `#` starts a comment, blank lines are
//! ignored. An optional `kind groupoid` line after `g` drops associativity
//! from the axioms; semigroups are the default and are written without it.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::structure::{cover_relation, validate, Kind, PoGammaStructure, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Shape { line: usize, message: String },
    #[error("axiom violation: {violation}")]
    Axiom { violation: Violation, count: usize },
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices() {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &body[s..pos]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(s) = start {
                tokens.push((s + 1, &body[s..]));
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, expecting: &str) -> Result<&Line<'a>, ParseError> {
        let last = self.lines.last().map_or(1, |l| l.number + 1);
        let line = self.lines.get(self.pos).ok_or_else(|| ParseError::Syntax {
            line: last,
            column: 1,
            message: format!("unexpected end of input, expected {expecting}"),
        })?;
        self.pos += 1;
        Ok(line)
    }

    fn peek_keyword(&self) -> Option<&str> {
        self.lines.get(self.pos).map(|l| l.tokens[0].1)
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn number(line: usize, (column, tok): (usize, &str)) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, column, format!("expected a non-negative integer, found `{tok}`")))
}

fn header(cur: &mut Cursor<'_>, key: &str) -> Result<usize, ParseError> {
    let line = cur.next(&format!("`{key} <count>`"))?;
    let (num, toks) = (line.number, &line.tokens);
    if toks[0].1 != key {
        return Err(syntax(
            num,
            toks[0].0,
            format!("expected `{key}`, found `{}`", toks[0].1),
        ));
    }
    if toks.len() != 2 {
        return Err(syntax(num, toks[0].0, format!("`{key}` takes exactly one value")));
    }
    let v = number(num, toks[1])?;
    if v == 0 {
        return Err(syntax(num, toks[1].0, format!("`{key}` must be at least 1")));
    }
    Ok(v)
}

fn matrix_row(line: &Line<'_>, n: usize, what: &str) -> Result<Vec<usize>, ParseError> {
    if line.tokens.len() != n {
        return Err(ParseError::Shape {
            line: line.number,
            message: format!("{what} row has {} entries, expected {n}", line.tokens.len()),
        });
    }
    line.tokens.iter().map(|&t| number(line.number, t)).collect()
}

/// Parses and validates one structure document.
pub fn parse_structure(text: &str) -> Result<PoGammaStructure, ParseError> {
    let s = parse_unvalidated(text)?;
    let report = validate(&s);
    match report.violations.first() {
        None => Ok(s),
        Some(v) => Err(ParseError::Axiom {
            violation: v.clone(),
            count: report.violations.len(),
        }),
    }
}

/// Parses one document, checking syntax and shapes but not the axioms.
pub fn parse_unvalidated(text: &str) -> Result<PoGammaStructure, ParseError> {
    let mut cur = Cursor {
        lines: lines(text),
        pos: 0,
    };
    let n = header(&mut cur, "n")?;
    let g = header(&mut cur, "g")?;
    let mut kind = Kind::Semigroup;
    if cur.peek_keyword() == Some("kind") {
        let line = cur.next("`kind`")?;
        kind = match line.tokens.get(1).map(|t| t.1) {
            Some("groupoid") if line.tokens.len() == 2 => Kind::Groupoid,
            Some("semigroup") if line.tokens.len() == 2 => Kind::Semigroup,
            _ => {
                return Err(syntax(
                    line.number,
                    line.tokens[0].0,
                    "expected `kind groupoid` or `kind semigroup`",
                ))
            }
        };
    }

    let mut tables: Vec<Option<Vec<usize>>> = vec![None; g];
    for _ in 0..g {
        let line = cur.next("`op <label>`")?;
        let (num, toks) = (line.number, line.tokens.clone());
        if toks[0].1 != "op" || toks.len() != 2 {
            return Err(syntax(
                num,
                toks[0].0,
                format!("expected `op <label>`, found `{}`", toks[0].1),
            ));
        }
        let gamma = number(num, toks[1])?;
        if gamma >= g {
            return Err(ParseError::Shape {
                line: num,
                message: format!("label {gamma} is not below g = {g}"),
            });
        }
        if tables[gamma].is_some() {
            return Err(ParseError::Shape {
                line: num,
                message: format!("table {gamma} given twice"),
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for _ in 0..n {
            let row = cur.next("a table row")?;
            let values = matrix_row(row, n, "table")?;
            if let Some(i) = values.iter().position(|&v| v >= n) {
                return Err(syntax(
                    row.number,
                    row.tokens[i].0,
                    format!("entry {} is not an element of 0..{n}", values[i]),
                ));
            }
            table.extend(values);
        }
        tables[gamma] = Some(table);
    }

    let line = cur.next("`leq`")?;
    if line.tokens[0].1 != "leq" || line.tokens.len() != 1 {
        return Err(syntax(
            line.number,
            line.tokens[0].0,
            format!("expected `leq`, found `{}`", line.tokens[0].1),
        ));
    }
    let mut leq = Vec::with_capacity(n * n);
    for _ in 0..n {
        let row = cur.next("an order row")?;
        let values = matrix_row(row, n, "order")?;
        if let Some(i) = values.iter().position(|&v| v > 1) {
            return Err(syntax(row.number, row.tokens[i].0, "order entries must be 0 or 1"));
        }
        leq.extend(values.into_iter().map(|v| v == 1));
    }
    if let Some(extra) = cur.lines.get(cur.pos) {
        return Err(syntax(
            extra.number,
            extra.tokens[0].0,
            "trailing content after the order matrix",
        ));
    }

    let op = tables.into_iter().flatten().flatten().collect();
    PoGammaStructure::from_flat(n, g, op, leq, kind).map_err(|e| ParseError::Shape {
        line: 1,
        message: e.to_string(),
    })
}

/// Splits a multi-document stream on lines consisting of `---`.
pub fn split_documents(text: &str) -> Vec<&str> {
    let mut docs = Vec::new();
    let mut start = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim() == "---" {
            docs.push(&text[start..offset]);
            start = offset + line.len();
        }
        offset += line.len();
    }
    docs.push(&text[start..]);
    docs.into_iter().filter(|d| !lines(d).is_empty()).collect()
}

/// Writes `s` in canonical field order, one matrix row per line.
pub fn serialize_structure(s: &PoGammaStructure) -> String {
    let mut out = String::new();
    write_structure(&mut out, s).expect("writing to a String");
    out
}

fn write_structure(out: &mut impl fmt::Write, s: &PoGammaStructure) -> fmt::Result {
    let n = s.n();
    writeln!(out, "n {n}")?;
    writeln!(out, "g {}", s.g())?;
    if s.kind() == Kind::Groupoid {
        writeln!(out, "kind groupoid")?;
    }
    for gamma in 0..s.g() {
        writeln!(out, "op {gamma}")?;
        for row in s.table(gamma).chunks(n) {
            writeln!(out, "{}", join(row.iter().map(usize::to_string)))?;
        }
    }
    writeln!(out, "leq")?;
    for a in 0..n {
        writeln!(
            out,
            "{}",
            join((0..n).map(|b| if s.leq(a, b) { "1" } else { "0" }.to_string()))
        )?;
    }
    Ok(())
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

/// The Hasse diagram of the order (cover pairs only) as a DOT digraph, bottom to top.
pub fn hasse_dot(s: &PoGammaStructure) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for a in 0..s.n() {
        let _ = writeln!(out, "  {a};");
    }
    for (a, b) in cover_relation(s) {
        let _ = writeln!(out, "  {a} -> {b};");
    }
    out.push_str("}\n");
    out
}
