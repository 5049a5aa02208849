//! Self-contained JSON certificates and their independent re-check.
//!
//! A certificate carries every function table of `H`, the edge list of `H`,
//! and the wide colouring of `G`. `G` itself is rebuilt from the parameters
//! and matched by hash. Search verdicts are recorded with their budgets and
//! trusted; everything else is re-verified.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::exp::{verify_product_coloring, ExpIndex, ProductCheck};
use super::family::{all_labels, FunctionVertex, SelectorReading, TableContext};
use super::params::CounterexampleParams;
use super::verify::{ChiGReport, SearchSummary, Status, StructuralCheck, Verification};
use crate::constructions::omega_tuples;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{SearchBudget, VerdictKind};
use crate::widecolor::{check_wide, WideColoring, WideCondition};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCounts {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// Trusted: recorded from the search with its node count and budget.
    pub chi_h: SearchSummary,
    pub product: ProductCheck,
    pub chi_g: ChiGReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub chi_h: SearchBudget,
    pub chi_g: Option<SearchBudget>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub params: CounterexampleParams,
    pub reading: SelectorReading,
    pub g_hash: String,
    pub g_counts: GraphCounts,
    pub h: Vec<FunctionVertex>,
    pub h_edges: Vec<(usize, usize)>,
    pub gamma: WideColoring,
    pub verdicts: Verdicts,
    pub budgets: Budgets,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn emit_certificate(v: &Verification) -> Result<Certificate> {
    let r = &v.report;
    if r.status != Status::Pass {
        return Err(Error::Certificate(format!("report status is {:?}", r.status)));
    }
    let cx = v
        .artifact
        .as_ref()
        .ok_or_else(|| Error::Certificate("no built counterexample attached".into()))?;
    let missing = || Error::Certificate("report lacks a mandatory verdict".into());
    let chi_h = r.chi_h.clone().ok_or_else(missing)?;
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        params: cx.params,
        reading: cx.reading,
        g_hash: cx.g().hash(),
        g_counts: GraphCounts {
            vertices: cx.g().n(),
            edges: cx.g().edge_count(),
        },
        h: cx.functions.clone(),
        h_edges: cx.h.edges().collect(),
        gamma: cx.gamma.clone(),
        verdicts: Verdicts {
            chi_h: chi_h.clone(),
            product: r.product.clone().ok_or_else(missing)?,
            chi_g: r.chi_g.clone(),
        },
        budgets: Budgets {
            chi_h: chi_h.budget,
            chi_g: r.chi_g.search.as_ref().map(|s| s.budget),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub ok: bool,
    pub findings: Vec<StructuralCheck>,
}

pub fn check_certificate(cert: &Certificate) -> CertificateCheck {
    let mut findings = Vec::new();
    let ok = run_checks(cert, &mut findings).is_ok() && findings.iter().all(|f| f.ok);
    CertificateCheck { ok, findings }
}

fn run_checks(cert: &Certificate, findings: &mut Vec<StructuralCheck>) -> Result<()> {
    let mut record = |name: &str, ok: bool, detail: String| -> Result<()> {
        findings.push(StructuralCheck {
            name: name.into(),
            ok,
            detail: detail.clone(),
        });
        if ok {
            Ok(())
        } else {
            Err(Error::Certificate(format!("{name}: {detail}")))
        }
    };
    let p = &cert.params;

    record(
        "version",
        cert.version == CERTIFICATE_VERSION,
        format!("{}", cert.version),
    )?;
    let valid = p.validate();
    record("parameters", valid.is_ok(), format!("{valid:?}"))?;

    let g: Graph = omega_tuples(p.omega_colors(), p.d_g)?.graph;
    let hash = g.hash();
    record("G hash", hash == cert.g_hash, format!("rebuilt {hash}"))?;
    record(
        "G counts",
        cert.g_counts == GraphCounts { vertices: g.n(), edges: g.edge_count() },
        format!("{} vertices, {} edges", g.n(), g.edge_count()),
    )?;

    let gamma = &cert.gamma;
    record(
        "wide colouring metadata",
        gamma.graph_hash == hash && gamma.n == p.n && gamma.k == p.k && gamma.d == p.d_g,
        format!("n={}, k={}, d={}", gamma.n, gamma.k, gamma.d),
    )?;
    let wide = check_wide(&g, gamma, WideCondition::ExactIndependent);
    record("wide colouring", matches!(wide, Ok(true)), format!("{wide:?}"))?;

    let labels: Vec<_> = cert.h.iter().map(|f| f.label).collect();
    record(
        "H labels",
        labels == all_labels(p),
        format!("{} labels", labels.len()),
    )?;
    let distinct: HashSet<&[u8]> = cert.h.iter().map(|f| f.table.as_slice()).collect();
    record(
        "H tables distinct",
        distinct.len() == cert.h.len(),
        format!("{} distinct of {}", distinct.len(), cert.h.len()),
    )?;

    let ctx = TableContext::new(&g, gamma, *p, cert.reading)?;
    let mismatched: Vec<String> = cert
        .h
        .iter()
        .filter(|f| ctx.table(&f.label).map(|t| t != f.table).unwrap_or(true))
        .map(|f| f.label.to_string())
        .collect();
    record(
        "H tables re-derived from labels",
        mismatched.is_empty(),
        format!("mismatched: {mismatched:?}"),
    )?;

    let recomputed: BTreeSet<(usize, usize)> = ExpIndex::new(&g, p.c, &cert.h)?.graph().edges().collect();
    let listed: BTreeSet<(usize, usize)> = cert
        .h_edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    record(
        "H edges match exponential adjacency",
        recomputed == listed && listed.len() == cert.h_edges.len(),
        format!(
            "{} listed, {} recomputed, {} missing, {} extra",
            cert.h_edges.len(),
            recomputed.len(),
            recomputed.difference(&listed).count(),
            listed.difference(&recomputed).count()
        ),
    )?;
    let h = Graph::new(cert.h.len(), listed.iter().copied())?;
    record("H loopless", !h.has_loops(), format!("{} loops", h.loop_count()))?;

    let product = verify_product_coloring(&g, &h, &cert.h, p.c);
    record(
        "product colouring",
        product.ok,
        format!("{} ordered checks, witness {:?}", product.checks, product.witness),
    )?;

    record(
        "chi(H) > c verdict (trusted with budget)",
        cert.verdicts.chi_h.verdict == VerdictKind::Infeasible,
        format!(
            "{:?} after {} nodes, budget {:?}",
            cert.verdicts.chi_h.verdict, cert.verdicts.chi_h.nodes, cert.budgets.chi_h
        ),
    )?;
    Ok(())
}
