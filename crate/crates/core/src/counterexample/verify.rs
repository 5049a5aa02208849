//! End-to-end verification of a counterexample pipeline.

use log::info;
use serde::{Deserialize, Serialize};

use super::build::{build_base, build_functions, build_on_base, Counterexample};
use super::exp::{exp_adjacent, verify_product_coloring, ExpIndex, ProductCheck};
use super::family::{FunctionLabel, SelectorReading};
use super::params::{CounterexampleParams, Variant};
use crate::graph::Graph;
use crate::solver::{find_coloring, Coloring, SearchBudget, Verdict, VerdictKind};
use crate::widecolor::WideColoring;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Budget for the mandatory `χ(H) > c` search.
    pub budget: SearchBudget,
    /// Budget for the optional `χ(G) > c` search; `None` skips it.
    pub chi_g_budget: Option<SearchBudget>,
    pub reading: SelectorReading,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: SearchBudget::default(),
            chi_g_budget: None,
            reading: SelectorReading::ClassQ,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Failed,
    /// A mandatory search ran out of budget.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCheck {
    pub name: String,
    pub expected: usize,
    pub actual: usize,
    pub ok: bool,
    /// A mismatch on a mandatory count fails the report; otherwise it is
    /// listed under `discrepancies`.
    pub mandatory: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingOutcome {
    pub reading: SelectorReading,
    pub h_edges: Option<usize>,
    pub note: Option<String>,
}

/// `|E(H)|` under both selector readings of the refined five-colour family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingComparison {
    pub expected_edges: usize,
    pub outcomes: Vec<ReadingOutcome>,
    pub matching: Vec<SelectorReading>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub verdict: VerdictKind,
    pub nodes: u64,
    pub budget: SearchBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiGStatus {
    /// Exhaustive search found no `c`-colouring of `G`.
    MachineChecked,
    /// Search ran out of budget; the bound rests on the known chromatic
    /// number of the tuple construction.
    NotMachineChecked,
    Skipped,
    /// A `c`-colouring of `G` was found: the pipeline is wrong.
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiGReport {
    pub status: ChiGStatus,
    pub search: Option<SearchSummary>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub params: CounterexampleParams,
    pub reading: SelectorReading,
    pub status: Status,
    pub g_hash: Option<String>,
    pub counts: Vec<CountCheck>,
    pub reading_comparison: Option<ReadingComparison>,
    pub chi_h: Option<SearchSummary>,
    /// Present only if `H` turned out `c`-colourable.
    pub chi_h_witness: Option<Coloring>,
    pub product: Option<ProductCheck>,
    pub chi_g: ChiGReport,
    pub structural: Vec<StructuralCheck>,
    pub failures: Vec<String>,
    /// Non-mandatory mismatches; they do not affect `status`.
    pub discrepancies: Vec<String>,
}

pub struct Verification {
    pub report: Report,
    pub artifact: Option<Counterexample>,
}

fn skipped_chi_g() -> ChiGReport {
    ChiGReport {
        status: ChiGStatus::Skipped,
        search: None,
        note: "not requested".into(),
    }
}

pub const CHI_G_NOTE: &str = "chi(G) > c not machine-checked within budget; relies on the known \
     chromatic number m of the tuple construction over K_m";

pub fn verify_counterexample(params: &CounterexampleParams, options: &VerifyOptions) -> Verification {
    let mut report = Report {
        params: *params,
        reading: options.reading,
        status: Status::Failed,
        g_hash: None,
        counts: Vec::new(),
        reading_comparison: None,
        chi_h: None,
        chi_h_witness: None,
        product: None,
        chi_g: skipped_chi_g(),
        structural: Vec::new(),
        failures: Vec::new(),
        discrepancies: Vec::new(),
    };
    let failed = |mut report: Report, msg: String| {
        report.failures.push(msg);
        report.status = Status::Failed;
        Verification {
            report,
            artifact: None,
        }
    };

    if let Err(e) = params.validate() {
        return failed(report, format!("parameter check: {e}"));
    }
    let (omega, gamma) = match build_base(params) {
        Ok(x) => x,
        Err(e) => return failed(report, format!("building G: {e}")),
    };
    report.g_hash = Some(omega.graph.hash());

    if params.variant == Variant::C5Refined {
        report.reading_comparison = Some(compare_readings(params, &omega.graph, &gamma));
    }

    let cx = match build_on_base(params, options.reading, omega, gamma) {
        Ok(x) => x,
        Err(e) => return failed(report, format!("building H: {e}")),
    };

    let expected = params.expected();
    let mut count = |name: &str, expected: usize, actual: usize, mandatory: bool| {
        report.counts.push(CountCheck {
            name: name.into(),
            expected,
            actual,
            ok: expected == actual,
            mandatory,
        })
    };
    count("|V(G)|", expected.g_vertices, cx.g().n(), true);
    if let Some(e) = expected.g_edges {
        count("|E(G)|", e, cx.g().edge_count(), true);
    }
    if let Some(e) = expected.h_vertices {
        count("|V(H)|", e, cx.h.n(), true);
    }
    // The edge count of H is a by-product of the tables, not part of the
    // counterexample claim.
    if let Some(e) = expected.h_edges {
        count("|E(H)|", e, cx.h.edge_count(), false);
    }
    for c in &report.counts {
        if !c.ok {
            let msg = format!("{}: expected {}, got {}", c.name, c.expected, c.actual);
            if c.mandatory {
                report.failures.push(msg);
            } else {
                report.discrepancies.push(msg);
            }
        }
    }

    info!("{}: searching for a {}-colouring of H", params.variant, params.c);
    let out = find_coloring(&cx.h, params.c, &options.budget);
    report.chi_h = Some(SearchSummary {
        verdict: out.verdict.kind(),
        nodes: out.nodes,
        budget: options.budget,
    });
    let mut inconclusive = false;
    match out.verdict {
        Verdict::Infeasible => {}
        Verdict::Found(col) => {
            report
                .failures
                .push(format!("H has a {}-colouring", params.c));
            report.chi_h_witness = Some(col);
        }
        Verdict::Exhausted => inconclusive = true,
    }

    info!("{}: checking the product colouring", params.variant);
    let product = verify_product_coloring(cx.g(), &cx.h, &cx.functions, params.c);
    if !product.ok {
        report
            .failures
            .push(format!("product colouring fails: {:?}", product.witness));
    }
    report.product = Some(product);

    if let Some(b) = options.chi_g_budget {
        report.chi_g = chi_g_report(cx.g(), params.c, &b);
        if report.chi_g.status == ChiGStatus::Refuted {
            report.failures.push("G has a c-colouring".into());
        }
    }

    report.structural = structural_checks(&cx);
    for s in &report.structural {
        if !s.ok {
            report.failures.push(format!("{}: {}", s.name, s.detail));
        }
    }

    report.status = if !report.failures.is_empty() {
        Status::Failed
    } else if inconclusive {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    Verification {
        report,
        artifact: Some(cx),
    }
}

/// Budgeted search for a `c`-colouring of `g`, reported as evidence for
/// `χ(g) > c`.
pub fn chi_g_report(g: &Graph, c: usize, budget: &SearchBudget) -> ChiGReport {
    let out = find_coloring(g, c, budget);
    let search = Some(SearchSummary {
        verdict: out.verdict.kind(),
        nodes: out.nodes,
        budget: *budget,
    });
    let (status, note) = match out.verdict {
        Verdict::Infeasible => (ChiGStatus::MachineChecked, "exhaustive search: no c-colouring".into()),
        Verdict::Exhausted => (ChiGStatus::NotMachineChecked, CHI_G_NOTE.into()),
        Verdict::Found(_) => (ChiGStatus::Refuted, "search found a c-colouring of G".into()),
    };
    ChiGReport { status, search, note }
}

fn compare_readings(params: &CounterexampleParams, g: &Graph, gamma: &WideColoring) -> ReadingComparison {
    let expected_edges = params.expected().h_edges.unwrap_or(0);
    let outcomes: Vec<ReadingOutcome> = [SelectorReading::ClassQ, SelectorReading::ClassOne]
        .into_iter()
        .map(|reading| {
            let built = build_functions(g, gamma, params, reading)
                .and_then(|fs| Ok(ExpIndex::new(g, params.c, &fs)?.graph().edge_count()));
            match built {
                Ok(e) => ReadingOutcome {
                    reading,
                    h_edges: Some(e),
                    note: None,
                },
                Err(e) => ReadingOutcome {
                    reading,
                    h_edges: None,
                    note: Some(e.to_string()),
                },
            }
        })
        .collect();
    let matching = outcomes
        .iter()
        .filter(|o| o.h_edges == Some(expected_edges))
        .map(|o| o.reading)
        .collect();
    ReadingComparison {
        expected_edges,
        outcomes,
        matching,
    }
}

/// Edge facts used by the non-colourability argument, checked on `H`.
pub fn structural_checks(cx: &Counterexample) -> Vec<StructuralCheck> {
    let p = cx.params;
    let (c, n, k) = (p.c, p.n, p.k);
    let g = cx.g();
    let adj = |a: &FunctionLabel, b: &FunctionLabel| -> Option<bool> {
        let (i, j) = (cx.index_of(a)?, cx.index_of(b)?);
        Some(cx.h.has_edge(i, j))
    };
    let mut out = Vec::new();
    let mut push = |name: String, ok: bool, detail: String| out.push(StructuralCheck { name, ok, detail });

    push(
        "H is loopless".into(),
        !cx.h.has_loops(),
        format!("{} loops", cx.h.loop_count()),
    );

    // const_i ~ x  iff  i not in im(x)
    let mut bad = Vec::new();
    for (xi, x) in cx.functions.iter().enumerate() {
        let image = x.image();
        for i in 1..=c {
            let ci = cx.index_of(&FunctionLabel::Const { i }).expect("constants present");
            let expect = !image.contains(&(i as u8));
            if cx.h.has_edge(ci, xi) != expect {
                bad.push(format!("const_{i} vs {}", x.label));
            }
        }
    }
    push(
        "const_i adjacent to x iff i not in im(x)".into(),
        bad.is_empty(),
        format!("{} vertices x {} constants; mismatches: {:?}", cx.functions.len(), c, bad),
    );

    // A direct edge scan, independent of the index used to build H.
    let f_idx = cx.index_of(&FunctionLabel::F).expect("f present");
    for q in 1..=n {
        let firsts: Vec<&FunctionLabel> = cx
            .functions
            .iter()
            .map(|x| &x.label)
            .filter(|l| match l {
                FunctionLabel::H3 { q: lq, .. } => *lq == q,
                FunctionLabel::H4 { q: lq, d: 1, .. } => *lq == q,
                _ => false,
            })
            .collect();
        let bad: Vec<String> = firsts
            .iter()
            .filter(|l| {
                let i = cx.index_of(l).unwrap();
                !exp_adjacent(g, c, &cx.functions[i], &cx.functions[f_idx]).unwrap_or(false)
            })
            .map(|l| l.to_string())
            .collect();
        push(
            format!("q={q}: walk-1 h functions adjacent to f"),
            !firsts.is_empty() && bad.is_empty(),
            format!("{} checked; failing: {:?}", firsts.len(), bad),
        );

        let gs: Vec<usize> = (0..cx.functions.len())
            .filter(|&i| cx.functions[i].label.is_g() && cx.functions[i].label.q() == Some(q))
            .collect();
        let want = match p.variant {
            Variant::C7 => c - n,
            Variant::C5Refined => k + 1,
            Variant::C5Wide => c - k,
        };
        let clique = gs
            .iter()
            .enumerate()
            .all(|(x, &a)| gs[x + 1..].iter().all(|&b| cx.h.has_edge(a, b)));
        push(
            format!("q={q}: g family is a clique of size {want}"),
            clique && gs.len() == want,
            format!("{} g functions", gs.len()),
        );

        if p.variant == Variant::C7 {
            let ok = (n + 1..=c).all(|j| {
                adj(&FunctionLabel::G3 { q, j }, &FunctionLabel::H3 { q, j }) == Some(true)
            });
            push(format!("q={q}: g^q_j adjacent to h^q_j"), ok, format!("j in {}..={c}", n + 1));
        }
    }

    if p.variant != Variant::C7 {
        // h^{(d)}_{i,j} ~ h^{(d+1)}_{i',j'} whenever i != i', j != j', i != j'.
        let h4: Vec<(usize, usize, usize, usize, usize)> = cx
            .functions
            .iter()
            .enumerate()
            .filter_map(|(x, f)| match f.label {
                FunctionLabel::H4 { q, d, i, j } => Some((x, q, d, i, j)),
                _ => None,
            })
            .collect();
        let mut checked = 0usize;
        let mut bad = Vec::new();
        for &(a, q, d, i, j) in &h4 {
            for &(b, q2, d2, i2, j2) in &h4 {
                if q == q2 && d2 == d + 1 && i != i2 && j != j2 && i != j2 {
                    checked += 1;
                    if !cx.h.has_edge(a, b) {
                        bad.push((cx.functions[a].label.to_string(), cx.functions[b].label.to_string()));
                    }
                }
            }
        }
        push(
            "h-chain: level d adjacent to level d+1 under index constraints".into(),
            checked > 0 && bad.is_empty(),
            format!("{checked} pairs checked; failing: {bad:?}"),
        );
    }

    match p.variant {
        Variant::C5Refined => {
            for q in 1..=n {
                let q2 = super::family::cyclic_shift(q, 2, n);
                let pairs = [(5, 4), (4, 5), (5, q2)];
                let ok = pairs.iter().all(|&(l, i)| {
                    adj(
                        &FunctionLabel::G4 { q, i },
                        &FunctionLabel::H4 { q, d: 2, i: l, j: i },
                    ) == Some(true)
                });
                push(
                    format!("q={q}: g^q_i adjacent to h^(2)_(l,i)"),
                    ok,
                    format!("(l,i) in {pairs:?}"),
                );
            }
        }
        Variant::C5Wide => {
            for q in 1..=n {
                let h = |d, i, j| FunctionLabel::H4 { q, d, i, j };
                let mut steps: Vec<(FunctionLabel, FunctionLabel)> = Vec::new();
                for i in (1..=c).filter(|&i| i != q && i != c) {
                    steps.push((h(1, q, c), h(2, c, i)));
                    for j in (1..=c).filter(|&j| j != c && j != i) {
                        steps.push((h(2, c, i), h(3, i, j)));
                    }
                }
                for j in 1..c {
                    for l in (1..=c).filter(|&l| l != j) {
                        let mid = (1..=c).find(|&x| ![q, j, l, c].contains(&x)).expect("c >= 5");
                        steps.push((h(3, mid, j), h(4, j, l)));
                    }
                }
                for l in 1..=c {
                    for i in (1..=c).filter(|&i| i != l) {
                        let mid = (1..=c).find(|&x| ![c, l, i].contains(&x)).expect("c >= 4");
                        steps.push((h(4, mid, l), h(5, l, i)));
                    }
                }
                for i in k + 1..=c {
                    let l = (1..=c).find(|&x| x > k && x != i).expect("c >= k + 2");
                    steps.push((FunctionLabel::G4 { q, i }, h(5, l, i)));
                }
                let bad: Vec<String> = steps
                    .iter()
                    .filter(|(a, b)| adj(a, b) != Some(true))
                    .map(|(a, b)| format!("{a} / {b}"))
                    .collect();
                push(
                    format!("q={q}: named chain steps present and adjacent"),
                    bad.is_empty(),
                    format!("{} steps; failing: {bad:?}", steps.len()),
                );
            }
        }
        Variant::C7 => {}
    }
    out
}
