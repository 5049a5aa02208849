//! Adjacency in the exponential graph and the product-colouring check.
//!
//! Two routes compute adjacency. `exp_adjacent` scans every ordered edge of
//! `G`. `ExpIndex` precomputes, per function and colour, the preimage and its
//! neighbourhood as bitsets and tests disjointness word by word.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::FunctionVertex;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn check_domain(g: &Graph, t: &[u8]) -> Result<()> {
    if t.len() != g.n() {
        return Err(Error::MapLength {
            got: t.len(),
            expected: g.n(),
        });
    }
    Ok(())
}

/// First ordered edge `(v, v')` of `G` with `f(v) = g(v')`, if any.
pub fn exp_conflict(g: &Graph, f: &[u8], h: &[u8]) -> Result<Option<(usize, usize)>> {
    check_domain(g, f)?;
    check_domain(g, h)?;
    for v in 0..g.n() {
        let fv = f[v];
        if let Some(&w) = g.neighbor_slice(v).iter().find(|&&w| h[w as usize] == fv) {
            return Ok(Some((v, w as usize)));
        }
    }
    Ok(None)
}

/// `f` and `h` are adjacent in `K_c^G` iff `f(v) != h(v')` for every edge
/// `vv'`, in both orientations. `f == h` tests for a loop.
pub fn exp_adjacent(g: &Graph, c: usize, f: &FunctionVertex, h: &FunctionVertex) -> Result<bool> {
    for t in [&f.table, &h.table] {
        if let Some((vertex, &value)) = t.iter().enumerate().find(|(_, &x)| x == 0 || x as usize > c) {
            return Err(Error::MapValue {
                vertex,
                value: value as usize,
                limit: c,
            });
        }
    }
    Ok(exp_conflict(g, &f.table, &h.table)?.is_none())
}

/// Preimages and their neighbourhoods for a list of functions.
pub struct ExpIndex {
    preimage: Vec<Vec<VertexSet>>,
    reach: Vec<Vec<VertexSet>>,
}

impl ExpIndex {
    pub fn new(g: &Graph, c: usize, functions: &[FunctionVertex]) -> Result<ExpIndex> {
        for f in functions {
            check_domain(g, &f.table)?;
        }
        let (preimage, reach): (Vec<_>, Vec<_>) = functions
            .par_iter()
            .map(|f| {
                let mut pre = vec![VertexSet::new(g.n()); c + 1];
                for (v, &x) in f.table.iter().enumerate() {
                    pre[(x as usize).min(c)].insert(v);
                }
                let reach = pre.iter().map(|s| g.neighborhood(s)).collect();
                (pre, reach)
            })
            .unzip();
        Ok(ExpIndex { preimage, reach })
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.reach[a]
            .iter()
            .zip(&self.preimage[b])
            .all(|(r, p)| !r.intersects(p))
    }

    /// The graph on the indexed functions, edges by `adjacent`.
    pub fn graph(&self) -> Graph {
        let m = self.preimage.len();
        let edges: Vec<(usize, usize)> = (0..m)
            .into_par_iter()
            .flat_map_iter(|a| (a..m).filter(move |&b| self.adjacent(a, b)).map(move |b| (a, b)))
            .collect();
        Graph::new(m, edges).expect("indices in range")
    }
}

/// An improperly coloured edge `((v, f), (v', g))` of `G × H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub h_edge: (usize, usize),
    pub g_edge: (usize, usize),
    pub color: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub ok: bool,
    /// Ordered `(v, v')` comparisons performed per `H` edge, summed.
    pub checks: u64,
    pub witness: Option<ProductWitness>,
}

/// Checks that `(v, f) ↦ f(v)` properly colours `G × H` with `c` colours,
/// without building the product: every `H` edge `fg` against every ordered
/// `G` edge.
pub fn verify_product_coloring(g: &Graph, h: &Graph, functions: &[FunctionVertex], c: usize) -> ProductCheck {
    let fail = |witness| ProductCheck {
        ok: false,
        checks: 0,
        witness: Some(witness),
    };
    if functions.len() != h.n() {
        return fail(ProductWitness {
            h_edge: (functions.len(), h.n()),
            g_edge: (0, 0),
            color: 0,
        });
    }
    for (i, f) in functions.iter().enumerate() {
        if f.table.len() != g.n() {
            return fail(ProductWitness {
                h_edge: (i, i),
                g_edge: (f.table.len(), g.n()),
                color: 0,
            });
        }
        if let Some((v, &x)) = f.table.iter().enumerate().find(|(_, &x)| x == 0 || x as usize > c) {
            return fail(ProductWitness {
                h_edge: (i, i),
                g_edge: (v, v),
                color: x,
            });
        }
    }
    let h_edges: Vec<(usize, usize)> = h.edges().collect();
    let per_edge = 2 * g.edge_count() as u64 - g.loop_count() as u64;
    let first_bad = h_edges
        .par_iter()
        .enumerate()
        .filter_map(|(idx, &(a, b))| {
            exp_conflict(g, &functions[a].table, &functions[b].table)
                .expect("domains checked")
                .map(|e| (idx, a, b, e))
        })
        .min_by_key(|&(idx, ..)| idx);
    match first_bad {
        None => ProductCheck {
            ok: true,
            checks: per_edge * h_edges.len() as u64,
            witness: None,
        },
        Some((_, a, b, (v, w))) => fail(ProductWitness {
            h_edge: (a, b),
            g_edge: (v, w),
            color: functions[a].table[v],
        }),
    }
}
