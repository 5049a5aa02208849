//! Text, JSON and DOT renderings for command output.

use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use hedet_core::counterexample::{Counterexample, FunctionVertex, Report};
use hedet_core::Graph;

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub hash: String,
    pub output: Option<String>,
    /// The graph itself when no output path was given.
    pub dimacs: Option<String>,
}

impl GraphSummary {
    pub fn text(&self) -> String {
        format!("{} vertices, {} edges, sha256 {}", self.vertices, self.edges, self.hash)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BuildSummary {
    pub variant: String,
    pub g_vertices: usize,
    pub g_edges: usize,
    pub g_hash: String,
    pub h_vertices: usize,
    pub h_edges: usize,
    pub labels: Vec<String>,
}

impl BuildSummary {
    pub fn new(cx: &Counterexample) -> Self {
        BuildSummary {
            variant: cx.params.variant.to_string(),
            g_vertices: cx.g().n(),
            g_edges: cx.g().edge_count(),
            g_hash: cx.g().hash(),
            h_vertices: cx.h.n(),
            h_edges: cx.h.edge_count(),
            labels: cx.functions.iter().map(|f| f.label.to_string()).collect(),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "{}: G has {} vertices and {} edges; H has {} vertices and {} edges",
            self.variant, self.g_vertices, self.g_edges, self.h_vertices, self.h_edges
        )
    }
}

pub fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn dot(h: &Graph, functions: &[FunctionVertex]) -> String {
    let mut s = String::from("graph H {\n");
    for (i, f) in functions.iter().enumerate() {
        let _ = writeln!(s, "  {i} [label=\"{}\"];", f.label.to_string().replace('"', "\\\""));
    }
    for (u, v) in h.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

pub fn report_text(r: &Report, cert: Option<&Path>) -> String {
    let mut lines = vec![format!("{} ({:?} reading): {:?}", r.params.variant, r.reading, r.status)];
    for c in &r.counts {
        let mark = if c.ok { "ok" } else if c.mandatory { "FAIL" } else { "differs" };
        lines.push(format!("  [{mark}] {} = {} (expected {})", c.name, c.actual, c.expected));
    }
    if let Some(cmp) = &r.reading_comparison {
        for o in &cmp.outcomes {
            let what = match (o.h_edges, &o.note) {
                (Some(e), _) => format!("{e} edges"),
                (None, Some(n)) => format!("undefined ({n})"),
                (None, None) => "undefined".into(),
            };
            lines.push(format!("  reading {:?}: {what}", o.reading));
        }
        lines.push(format!("  readings matching {} edges: {:?}", cmp.expected_edges, cmp.matching));
    }
    if let Some(s) = &r.chi_h {
        lines.push(format!("  chi(H) > {}: {:?} after {} nodes", r.params.c, s.verdict, s.nodes));
    }
    if let Some(p) = &r.product {
        lines.push(format!("  product colouring: {} over {} ordered checks", if p.ok { "proper" } else { "NOT proper" }, p.checks));
    }
    lines.push(format!("  chi(G) > {}: {:?} ({})", r.params.c, r.chi_g.status, r.chi_g.note));
    let bad = r.structural.iter().filter(|s| !s.ok).count();
    lines.push(format!("  structural checks: {} of {} hold", r.structural.len() - bad, r.structural.len()));
    for d in &r.discrepancies {
        lines.push(format!("  discrepancy: {d}"));
    }
    for f in &r.failures {
        lines.push(format!("  failure: {f}"));
    }
    if let Some(p) = cert {
        if r.status == hedet_core::counterexample::Status::Pass {
            lines.push(format!("  certificate: {}", p.display()));
        } else {
            lines.push("  certificate: not written".into());
        }
    }
    lines.join("\n")
}
