//! Line-oriented instance format:
//!
//! ```text
//! # comment
//! n 3
//! tau 2
//! edge 0 1 1 2
//! edge 1 2 2
//! ```
//!
//! `n` and `tau` are the first two non-comment lines, in that order. Each
//! `edge u v t1 t2 ...` line needs `u < v < n` and `1 <= t_i <= tau`.

use std::fmt::Write;

use super::graph::{TemporalGraph, Time, Vertex};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(line: usize, field: &str, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{field}`")))
}

fn header(line: usize, text: &str, key: &str) -> Result<usize> {
    let mut fields = text.split_whitespace();
    if fields.next() != Some(key) {
        return Err(parse_err(line, format!("expected `{key} <int>`")));
    }
    let value = fields
        .next()
        .ok_or_else(|| parse_err(line, format!("missing value for `{key}`")))?;
    let value = parse_number(line, value, "an integer")?;
    if fields.next().is_some() {
        return Err(parse_err(line, format!("trailing fields after `{key}`")));
    }
    Ok(value)
}

pub fn parse_instance(text: &str) -> Result<TemporalGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n` line"))?;
    let n = header(line, first, "n")?;
    if n == 0 {
        return Err(parse_err(line, "n must be positive"));
    }
    let (line, second) = lines
        .next()
        .ok_or_else(|| parse_err(line + 1, "missing `tau` line"))?;
    let tau = header(line, second, "tau")?;
    if tau == 0 {
        return Err(parse_err(line, "tau must be positive"));
    }

    let mut edges: Vec<(Vertex, Vertex, Vec<Time>)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, text) in lines {
        let mut fields = text.split_whitespace();
        if fields.next() != Some("edge") {
            return Err(parse_err(line, format!("unrecognised line `{text}`")));
        }
        let u = fields
            .next()
            .ok_or_else(|| parse_err(line, "missing endpoint"))
            .and_then(|f| parse_number(line, f, "a vertex index"))?;
        let v = fields
            .next()
            .ok_or_else(|| parse_err(line, "missing endpoint"))
            .and_then(|f| parse_number(line, f, "a vertex index"))?;
        if u >= n || v >= n {
            return Err(parse_err(
                line,
                format!("vertex {} out of range 0..{n}", u.max(v)),
            ));
        }
        if u >= v {
            return Err(parse_err(
                line,
                format!("edge endpoints must satisfy u < v, got {u} {v}"),
            ));
        }
        let labels = fields
            .map(|f| parse_number(line, f, "a time-step"))
            .collect::<Result<Vec<_>>>()?;
        if labels.is_empty() {
            return Err(parse_err(line, "edge without time labels"));
        }
        if let Some(&t) = labels.iter().find(|&&t| t < 1 || t > tau) {
            return Err(parse_err(line, format!("label {t} outside 1..={tau}")));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(line, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v, labels));
    }
    TemporalGraph::new(n, tau, edges)
}

/// Canonical text form: edges in lexicographic order, labels ascending.
pub fn serialize_instance(g: &TemporalGraph) -> String {
    let mut out = format!("n {}\ntau {}\n", g.n(), g.tau());
    for e in g.edges() {
        write!(out, "edge {} {}", e.u, e.v).unwrap();
        for t in &e.labels {
            write!(out, " {t}").unwrap();
        }
        out.push('\n');
    }
    out
}
