use std::collections::HashMap;

use log::info;

use super::exp::ExpIndex;
use super::family::{all_labels, FunctionVertex, SelectorReading, TableContext};
use super::params::CounterexampleParams;
use crate::constructions::{omega_tuples, OmegaTuples};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::widecolor::{zero_position_coloring, WideColoring};

/// `G`, its wide colouring, and the subgraph `H` of `K_c^G`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub params: CounterexampleParams,
    pub reading: SelectorReading,
    pub omega: OmegaTuples,
    pub gamma: WideColoring,
    pub h: Graph,
    pub functions: Vec<FunctionVertex>,
}

impl Counterexample {
    pub fn g(&self) -> &Graph {
        &self.omega.graph
    }

    pub fn index_of(&self, label: &super::family::FunctionLabel) -> Option<usize> {
        self.functions.iter().position(|f| &f.label == label)
    }
}

/// Builds `G` and its zero-position wide colouring.
pub fn build_base(params: &CounterexampleParams) -> Result<(OmegaTuples, WideColoring)> {
    params.validate()?;
    let omega = omega_tuples(params.omega_colors(), params.d_g)?;
    let expected = params.expected();
    if omega.graph.n() != expected.g_vertices {
        return Err(Error::Internal(format!(
            "|V(G)| = {}, expected {}",
            omega.graph.n(),
            expected.g_vertices
        )));
    }
    if let Some(e) = expected.g_edges {
        if omega.graph.edge_count() != e {
            return Err(Error::Internal(format!(
                "|E(G)| = {}, expected {e}",
                omega.graph.edge_count()
            )));
        }
    }
    let gamma = zero_position_coloring(&omega, params.n, params.k)?;
    Ok((omega, gamma))
}

/// Tables for every label of `H`, with pairwise distinctness enforced.
pub fn build_functions(
    g: &Graph,
    gamma: &WideColoring,
    params: &CounterexampleParams,
    reading: SelectorReading,
) -> Result<Vec<FunctionVertex>> {
    let ctx = TableContext::new(g, gamma, *params, reading)?;
    let functions = all_labels(params)
        .into_iter()
        .map(|l| ctx.vertex(l))
        .collect::<Result<Vec<_>>>()?;
    let mut seen: HashMap<&[u8], usize> = HashMap::new();
    for (i, f) in functions.iter().enumerate() {
        if let Some(&j) = seen.get(f.table.as_slice()) {
            return Err(Error::Internal(format!(
                "{} and {} have identical tables",
                functions[j].label, f.label
            )));
        }
        seen.insert(&f.table, i);
    }
    Ok(functions)
}

/// `H` on the given functions, edges by exponential adjacency. Loops are fatal.
pub fn assemble_h(g: &Graph, c: usize, functions: &[FunctionVertex]) -> Result<Graph> {
    let h = ExpIndex::new(g, c, functions)?.graph();
    if let Some(v) = (0..h.n()).find(|&v| h.has_loop(v)) {
        return Err(Error::Internal(format!(
            "{} is a proper {c}-colouring of G (loop in H)",
            functions[v].label
        )));
    }
    Ok(h)
}

pub fn build_counterexample(params: &CounterexampleParams, reading: SelectorReading) -> Result<Counterexample> {
    let (omega, gamma) = build_base(params)?;
    info!(
        "{}: G has {} vertices, {} edges",
        params.variant,
        omega.graph.n(),
        omega.graph.edge_count()
    );
    build_on_base(params, reading, omega, gamma)
}

pub fn build_on_base(
    params: &CounterexampleParams,
    reading: SelectorReading,
    omega: OmegaTuples,
    gamma: WideColoring,
) -> Result<Counterexample> {
    let functions = build_functions(&omega.graph, &gamma, params, reading)?;
    if let Some(hv) = params.expected().h_vertices {
        if functions.len() != hv {
            return Err(Error::Internal(format!(
                "|V(H)| = {}, expected {hv}",
                functions.len()
            )));
        }
    }
    let h = assemble_h(&omega.graph, params.c, &functions)?;
    info!("{}: H has {} vertices, {} edges", params.variant, h.n(), h.edge_count());
    Ok(Counterexample {
        params: *params,
        reading,
        omega,
        gamma,
        h,
        functions,
    })
}
