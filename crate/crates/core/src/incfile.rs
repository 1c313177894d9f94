//! The `.inc` incidence text format.
//!
//! ```text
//! # comment
//! points 7
//! label 0 y
//! line: 0 1 2
//! ```
//!
//! `points N` comes first. Labels run to the end of the line and may contain
//! spaces. Each `line:` lists the points of one long line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::incidence::{IncidenceStructure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("points {a} and {b} lie on two long lines (file lines {first} and {second})")]
    InvariantViolation {
        a: u32,
        b: u32,
        first: usize,
        second: usize,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Parses `.inc` text. Line numbers in errors are 1-based.
pub fn parse_incidence(text: &str) -> Result<IncidenceStructure, ParseError> {
    let mut n: Option<usize> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut lines: Vec<Vec<u32>> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = match body.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (body, ""),
        };
        match head {
            "points" => {
                if n.is_some() {
                    return Err(syntax(ln, "duplicate `points` header"));
                }
                let v: usize = rest
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad point count {rest:?}")))?;
                n = Some(v);
                labels = vec![None; v];
            }
            "label" => {
                let count = n.ok_or_else(|| syntax(ln, "`label` before `points`"))?;
                let (idx, name) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(ln, "expected `label <idx> <name>`"))?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad point index {idx:?}")))?;
                if i >= count {
                    return Err(syntax(ln, format!("point {i} out of range (points {count})")));
                }
                labels[i] = Some(name.trim().to_string());
            }
            _ if head.starts_with("line:") || head == "line" => {
                let count = n.ok_or_else(|| syntax(ln, "`line:` before `points`"))?;
                let after = body
                    .strip_prefix("line:")
                    .or_else(|| body.strip_prefix("line").map(|r| r.trim_start().trim_start_matches(':')))
                    .unwrap_or("");
                let mut pts = Vec::new();
                for tok in after.split_whitespace() {
                    let p: u32 = tok
                        .parse()
                        .map_err(|_| syntax(ln, format!("bad point index {tok:?}")))?;
                    if p as usize >= count {
                        return Err(syntax(ln, format!("point {p} out of range (points {count})")));
                    }
                    pts.push(p);
                }
                pts.sort_unstable();
                pts.dedup();
                if pts.len() < 3 {
                    return Err(syntax(ln, "a long line needs at least 3 distinct points"));
                }
                lines.push(pts);
                origin.push(ln);
            }
            other => return Err(syntax(ln, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| syntax(0, "missing `points N` header"))?;
    match IncidenceStructure::new(n, lines) {
        Ok(s) => Ok(s.with_labels(labels)),
        Err(StructureError::PairOnTwoLines { a, b, first, second }) => Err(ParseError::InvariantViolation {
            a,
            b,
            first: origin[first],
            second: origin[second],
        }),
        Err(e) => Err(syntax(0, e.to_string())),
    }
}

/// Writes a structure in `.inc` format.
pub fn emit_incidence(s: &IncidenceStructure, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "points {}", s.point_count());
    for (i, l) in s.labels().iter().enumerate() {
        if let Some(l) = l {
            let _ = writeln!(out, "label {i} {l}");
        }
    }
    for line in s.lines() {
        out.push_str("line:");
        for p in line {
            let _ = write!(out, " {p}");
        }
        out.push('\n');
    }
    out
}
