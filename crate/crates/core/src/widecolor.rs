//! Wide colourings: colourings of a graph whose walk power `2d + 1` they
//! properly colour, checked through four equivalent local conditions.
//!
//! Colours are pairs `(a, b)` in `[n] x [k]`, 1-based. Condition (2) is the
//! production check; the others exist for cross-validation on small graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::constructions::{gamma_power, n_exact, n_exact_layers, n_upto, omega_sets, omega_tuples, OmegaTuples};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{find_homomorphism, is_proper_coloring, SearchBudget, Verdict, VerdictKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WideColoring {
    pub graph_hash: String,
    pub n: usize,
    pub k: usize,
    /// Half-width: the colouring targets the walk power `2d + 1`.
    pub d: usize,
    pub map: Vec<(usize, usize)>,
}

/// The fixed bijection `[n * k] -> [n] x [k]`.
pub fn pairing(a: usize, k: usize) -> (usize, usize) {
    ((a - 1) / k + 1, (a - 1) % k + 1)
}

impl WideColoring {
    pub fn alpha(&self, v: usize) -> usize {
        self.map[v].0
    }

    pub fn beta(&self, v: usize) -> usize {
        self.map[v].1
    }

    /// 0-based flat index of the class `(a, b)`.
    pub fn flat(&self, (a, b): (usize, usize)) -> usize {
        (a - 1) * self.k + (b - 1)
    }

    /// Colour classes indexed by `flat`.
    pub fn classes(&self) -> Vec<VertexSet> {
        let nv = self.map.len();
        let mut out = vec![VertexSet::new(nv); self.n * self.k];
        for (v, &p) in self.map.iter().enumerate() {
            out[self.flat(p)].insert(v);
        }
        out
    }

    pub fn class(&self, a: usize, b: usize) -> VertexSet {
        VertexSet::from_vertices(
            self.map.len(),
            self.map
                .iter()
                .enumerate()
                .filter(|(_, &p)| p == (a, b))
                .map(|(v, _)| v),
        )
    }

    /// `alpha^{-1}(a)`: union of the classes `(a, *)`.
    pub fn alpha_class(&self, a: usize) -> VertexSet {
        VertexSet::from_vertices(
            self.map.len(),
            self.map
                .iter()
                .enumerate()
                .filter(|(_, p)| p.0 == a)
                .map(|(v, _)| v),
        )
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        if self.map.len() != g.n() {
            return Err(Error::MapLength {
                got: self.map.len(),
                expected: g.n(),
            });
        }
        for (vertex, &(a, b)) in self.map.iter().enumerate() {
            if a == 0 || a > self.n {
                return Err(Error::MapValue { vertex, value: a, limit: self.n });
            }
            if b == 0 || b > self.k {
                return Err(Error::MapValue { vertex, value: b, limit: self.k });
            }
        }
        if let Some(v) = g.first_isolated_vertex() {
            return Err(Error::IsolatedVertex(v));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WideCondition {
    /// Proper colouring of the walk power `2d + 1`.
    Power,
    /// `N^{=d}` of every class is independent.
    ExactIndependent,
    /// `N^{=d'}` of every class is independent for all `d' <= d`.
    AllLevelsIndependent,
    /// `N^{<=d}` of every class induces a bipartite graph.
    Bipartite,
}

impl WideCondition {
    pub fn from_number(i: u8) -> Option<WideCondition> {
        Some(match i {
            1 => WideCondition::Power,
            2 => WideCondition::ExactIndependent,
            3 => WideCondition::AllLevelsIndependent,
            4 => WideCondition::Bipartite,
            _ => return None,
        })
    }
}

pub fn check_wide(g: &Graph, gamma: &WideColoring, condition: WideCondition) -> Result<bool> {
    gamma.validate(g)?;
    let d = gamma.d;
    Ok(match condition {
        WideCondition::Power => {
            let p = gamma_power(g, 2 * d + 1)?;
            let flat: Vec<usize> = gamma.map.iter().map(|&p| gamma.flat(p) + 1).collect();
            is_proper_coloring(&p, &flat, gamma.n * gamma.k)?
        }
        WideCondition::ExactIndependent => wide_violation(g, gamma)?.is_none(),
        WideCondition::AllLevelsIndependent => gamma.classes().par_iter().all(|s| {
            n_exact_layers(g, s, d)
                .iter()
                .all(|layer| g.is_independent(layer))
        }),
        WideCondition::Bipartite => gamma
            .classes()
            .par_iter()
            .all(|s| is_bipartite_on(g, &n_upto(g, s, d))),
    })
}

/// A class `(a, b)` and an edge inside `N^{=d}` of that class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WideViolation {
    pub class: (usize, usize),
    pub edge: (usize, usize),
}

/// First violation of condition (2), scanning classes in order.
pub fn wide_violation(g: &Graph, gamma: &WideColoring) -> Result<Option<WideViolation>> {
    gamma.validate(g)?;
    let classes = gamma.classes();
    let found: Vec<Option<(usize, usize)>> = classes
        .par_iter()
        .map(|s| {
            let reach = n_exact(g, s, gamma.d);
            reach.iter().find_map(|v| {
                g.neighbor_slice(v)
                    .iter()
                    .find(|&&u| reach.contains(u as usize))
                    .map(|&u| (v, u as usize))
            })
        })
        .collect();
    Ok(found.into_iter().enumerate().find_map(|(i, e)| {
        e.map(|edge| WideViolation {
            class: (i / gamma.k + 1, i % gamma.k + 1),
            edge,
        })
    }))
}

fn is_bipartite_on(g: &Graph, s: &VertexSet) -> bool {
    let mut side = vec![u8::MAX; g.n()];
    for root in s {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbor_slice(v) {
                let u = u as usize;
                if !s.contains(u) {
                    continue;
                }
                if side[u] == u8::MAX {
                    side[u] = 1 - side[v];
                    queue.push_back(u);
                } else if side[u] == side[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Colours each tuple vertex by the position of its zero coordinate, mapped
/// through `pairing`. Fails unless condition (2) holds at the graph's
/// half-width.
pub fn zero_position_coloring(omega: &OmegaTuples, n: usize, k: usize) -> Result<WideColoring> {
    if n * k != omega.n {
        return Err(Error::InvalidParameter(format!(
            "pairing [{}] -> [{n}]x[{k}] is not a bijection",
            omega.n
        )));
    }
    let gamma = WideColoring {
        graph_hash: omega.graph.hash(),
        n,
        k,
        d: omega.d,
        map: omega
            .tuples
            .iter()
            .map(|x| pairing(x.zero_position() + 1, k))
            .collect(),
    };
    if let Some(v) = wide_violation(&omega.graph, &gamma)? {
        return Err(Error::NotWide(format!(
            "class {:?} has edge {:?} inside N^={}",
            v.class, v.edge, omega.d
        )));
    }
    Ok(gamma)
}

/// Both sides of `Γ_d G -> H  <=>  G -> Ω_d H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionCheck {
    pub d: usize,
    pub power_to_target: VerdictKind,
    pub source_to_adjoint: VerdictKind,
    pub adjoint_vertices: usize,
}

impl AdjunctionCheck {
    pub fn holds(&self) -> bool {
        self.power_to_target == self.source_to_adjoint
    }
}

pub const ADJUNCTION_SOURCE_LIMIT: usize = 16;

/// The adjoint `Ω_d H` for odd `d`: `H` itself for `d = 1`, the tuple
/// construction for complete `H`, the set construction otherwise.
pub fn omega_of(h: &Graph, d: usize) -> Result<Graph> {
    if d.is_multiple_of(2) || d == 0 {
        return Err(Error::InvalidParameter(format!("walk length {d} must be odd")));
    }
    let half = (d - 1) / 2;
    if half == 0 {
        return Ok(h.clone());
    }
    let m = h.n();
    let is_complete = m >= 2 && !h.has_loops() && h.edge_count() == m * (m - 1) / 2;
    Ok(if is_complete {
        omega_tuples(m, half)?.graph
    } else {
        omega_sets(h, half)?.graph
    })
}

pub fn adjunction_check(g: &Graph, h: &Graph, d: usize, budget: &SearchBudget) -> Result<AdjunctionCheck> {
    if g.n() > ADJUNCTION_SOURCE_LIMIT {
        return Err(Error::SizeGuard {
            n: g.n(),
            limit: ADJUNCTION_SOURCE_LIMIT,
        });
    }
    let adjoint = omega_of(h, d)?;
    let left = find_homomorphism(&gamma_power(g, d)?, h, budget).verdict;
    let right = find_homomorphism(g, &adjoint, budget).verdict;
    if matches!(left, Verdict::Exhausted) || matches!(right, Verdict::Exhausted) {
        return Err(Error::BudgetExhausted("adjunction homomorphism search".into()));
    }
    Ok(AdjunctionCheck {
        d,
        power_to_target: left.kind(),
        source_to_adjoint: right.kind(),
        adjoint_vertices: adjoint.n(),
    })
}

pub fn adjunction_holds(g: &Graph, h: &Graph, d: usize, budget: &SearchBudget) -> Result<bool> {
    Ok(adjunction_check(g, h, d, budget)?.holds())
}
