//! DIMACS `.col` reading and writing.
//!
//! Canonical emission is `p edge n m` followed by `e u v` lines (1-based,
//! `u <= v`, lexicographically sorted). Loops are written as `e v v`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Dimacs { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(err("duplicate problem line".into()));
                }
                let fmt = parts.next();
                if !matches!(fmt, Some("edge") | Some("col")) {
                    return Err(err(format!("unsupported format {fmt:?}")));
                }
                let count = parse_num(parts.next(), line_no, "vertex count")?;
                // The declared edge count is advisory; many files count duplicates.
                parse_num(parts.next(), line_no, "edge count")?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens".into()));
                }
                n = Some(count);
            }
            Some("e") => {
                let Some(nv) = n else {
                    return Err(err("edge before problem line".into()));
                };
                let u = parse_num(parts.next(), line_no, "endpoint")?;
                let v = parse_num(parts.next(), line_no, "endpoint")?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens".into()));
                }
                for x in [u, v] {
                    if x == 0 || x > nv {
                        return Err(err(format!("vertex {x} outside 1..={nv}")));
                    }
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) => return Err(err(format!("unknown line type {tok:?}"))),
            None => unreachable!(),
        }
    }
    let n = n.ok_or(Error::Dimacs {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    Graph::new(n, edges)
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Dimacs {
        line,
        msg: format!("expected {what}"),
    })
}

pub fn emit(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 14);
    writeln!(out, "p edge {} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}
