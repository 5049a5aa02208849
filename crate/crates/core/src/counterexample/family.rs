//! Named vertices of the exponential graph `K_c^G`: functions `V(G) -> [c]`
//! described by a symbolic label and stored as a full table.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::params::{CounterexampleParams, Variant};
use crate::bitset::VertexSet;
use crate::constructions::n_exact_layers;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::widecolor::WideColoring;

/// Colours are 1-based; `q`, `i`, `j` are colours, `d` a walk length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FunctionLabel {
    Const { i: usize },
    F,
    /// `q` off `N^{=1}(α⁻¹(q))`, `j` on it.
    H3 { q: usize, j: usize },
    /// `j` off `N^{=2}(α⁻¹(q))`, minority colours on it.
    G3 { q: usize, j: usize },
    /// `i` off `N^{=d}(α⁻¹(q))`, `j` on it.
    H4 { q: usize, d: usize, i: usize, j: usize },
    /// `i` off `N^{=D}(α⁻¹(q))` for the variant's depth `D`, a class-indexed
    /// colour on it.
    G4 { q: usize, i: usize },
}

impl std::fmt::Display for FunctionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            FunctionLabel::Const { i } => write!(f, "const_{i}"),
            FunctionLabel::F => write!(f, "f"),
            FunctionLabel::H3 { q, j } => write!(f, "h^{q}_{j}"),
            FunctionLabel::G3 { q, j } => write!(f, "g^{q}_{j}"),
            FunctionLabel::H4 { q, d, i, j } => write!(f, "h^{{{q},({d})}}_{{{i},{j}}}"),
            FunctionLabel::G4 { q, i } => write!(f, "g^{q}_{i}"),
        }
    }
}

impl FunctionLabel {
    pub fn q(&self) -> Option<usize> {
        match *self {
            FunctionLabel::Const { .. } | FunctionLabel::F => None,
            FunctionLabel::H3 { q, .. }
            | FunctionLabel::G3 { q, .. }
            | FunctionLabel::H4 { q, .. }
            | FunctionLabel::G4 { q, .. } => Some(q),
        }
    }

    pub fn is_g(&self) -> bool {
        matches!(self, FunctionLabel::G3 { .. } | FunctionLabel::G4 { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionVertex {
    pub label: FunctionLabel,
    pub table: Vec<u8>,
}

impl FunctionVertex {
    /// Sorted set of values taken.
    pub fn image(&self) -> Vec<u8> {
        let mut seen = [false; 256];
        for &x in &self.table {
            seen[x as usize] = true;
        }
        (0..=255u8).filter(|&x| seen[x as usize]).collect()
    }
}

/// Which colour class selects the minority colour of `g^q_i` in the
/// refined five-colour family: `γ⁻¹(q, b)` or the literal `γ⁻¹(1, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectorReading {
    ClassQ,
    ClassOne,
}

/// `q ⊕ m` on `[n]`.
pub fn cyclic_shift(q: usize, m: usize, n: usize) -> usize {
    (q - 1 + m) % n + 1
}

/// The `k` smallest colours of `[n] \ {q}`.
pub fn minority_colors(q: usize, n: usize, k: usize) -> Vec<usize> {
    (1..=n).filter(|&x| x != q).take(k).collect()
}

/// Walk depth used by the `g` functions of a variant.
pub fn g_depth(variant: Variant) -> usize {
    match variant {
        Variant::C7 => 2,
        Variant::C5Refined => 3,
        Variant::C5Wide => 6,
    }
}

/// Labels of the per-`q` family, in vertex order.
pub fn family_labels(params: &CounterexampleParams, q: usize) -> Vec<FunctionLabel> {
    let CounterexampleParams { c, n, k, .. } = *params;
    let mut out = Vec::new();
    match params.variant {
        Variant::C7 => {
            out.extend((n + 1..=c).map(|j| FunctionLabel::H3 { q, j }));
            out.extend((n + 1..=c).map(|j| FunctionLabel::G3 { q, j }));
        }
        Variant::C5Refined => {
            let q2 = cyclic_shift(q, 2, n);
            let h = |d, i, j| FunctionLabel::H4 { q, d, i, j };
            out.extend([h(1, q, 4), h(1, q, 5), h(2, 4, 5), h(2, 5, 4), h(2, 5, q2)]);
            out.extend([4, 5, q2].map(|i| FunctionLabel::G4 { q, i }));
        }
        Variant::C5Wide => {
            let h = |d, i, j| FunctionLabel::H4 { q, d, i, j };
            out.extend((n + 1..=c).map(|j| h(1, q, j)));
            out.extend((1..=c).filter(|&i| i != q && i != c).map(|i| h(2, c, i)));
            for i in (1..=c).filter(|&i| i != q && i != c) {
                out.extend((1..=c).filter(|&j| j != c && j != i).map(|j| h(3, i, j)));
            }
            for j in 1..c {
                out.extend((1..=c).filter(|&l| l != j).map(|l| h(4, j, l)));
            }
            for l in 1..=c {
                out.extend((1..=c).filter(|&i| i != l).map(|i| h(5, l, i)));
            }
            out.extend((k + 1..=c).map(|i| FunctionLabel::G4 { q, i }));
        }
    }
    out
}

/// All labels of `H`: constants, `f`, then each `q` family in turn.
pub fn all_labels(params: &CounterexampleParams) -> Vec<FunctionLabel> {
    let mut out: Vec<FunctionLabel> = (1..=params.c).map(|i| FunctionLabel::Const { i }).collect();
    out.push(FunctionLabel::F);
    for q in 1..=params.n {
        out.extend(family_labels(params, q));
    }
    out
}

/// Walk neighbourhoods of colour classes, computed once per build.
pub struct TableContext<'a> {
    g: &'a Graph,
    gamma: &'a WideColoring,
    params: CounterexampleParams,
    reading: SelectorReading,
    /// `alpha_layers[q - 1][t] = N^{=t}(α⁻¹(q))`.
    alpha_layers: Vec<Vec<VertexSet>>,
    /// `class_reach[(a, b)] = N^{=D}(γ⁻¹(a, b))` at the `g` depth.
    class_reach: HashMap<(usize, usize), VertexSet>,
}

impl<'a> TableContext<'a> {
    pub fn new(
        g: &'a Graph,
        gamma: &'a WideColoring,
        params: CounterexampleParams,
        reading: SelectorReading,
    ) -> Result<Self> {
        if gamma.map.len() != g.n() || gamma.n != params.n || gamma.k != params.k {
            return Err(Error::InvalidParameter(
                "wide colouring does not match graph or parameters".into(),
            ));
        }
        let depth = g_depth(params.variant);
        let alpha_layers = (1..=params.n)
            .map(|q| n_exact_layers(g, &gamma.alpha_class(q), depth))
            .collect();
        let mut class_reach = HashMap::new();
        for a in 1..=params.n {
            for b in 1..=params.k {
                let layers = n_exact_layers(g, &gamma.class(a, b), depth);
                class_reach.insert((a, b), layers[depth].clone());
            }
        }
        Ok(TableContext {
            g,
            gamma,
            params,
            reading,
            alpha_layers,
            class_reach,
        })
    }

    pub fn reading(&self) -> SelectorReading {
        self.reading
    }

    fn alpha_reach(&self, q: usize, d: usize) -> Result<&VertexSet> {
        self.alpha_layers
            .get(q.wrapping_sub(1))
            .and_then(|l| l.get(d))
            .ok_or_else(|| Error::InvalidParameter(format!("no walk layer for q={q}, d={d}")))
    }

    fn two_valued(&self, outside: usize, inside: usize, set: &VertexSet) -> Vec<u8> {
        (0..self.g.n())
            .map(|v| if set.contains(v) { inside } else { outside } as u8)
            .collect()
    }

    /// `outside` off `N^{=D}(α⁻¹(q))`; on it, `color_of(b)` for the least
    /// `b` with `v ∈ N^{=D}(γ⁻¹(selector, b))`.
    fn class_indexed(
        &self,
        q: usize,
        outside: usize,
        selector: usize,
        color_of: impl Fn(usize) -> usize,
    ) -> Result<Vec<u8>> {
        let depth = g_depth(self.params.variant);
        let reach = self.alpha_reach(q, depth)?;
        let mut table = Vec::with_capacity(self.g.n());
        for v in 0..self.g.n() {
            if !reach.contains(v) {
                table.push(outside as u8);
                continue;
            }
            let b = (1..=self.params.k)
                .find(|&b| self.class_reach[&(selector, b)].contains(v))
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "g^{q}_{outside} undefined at vertex {v}: no class ({selector}, b) reaches it"
                    ))
                })?;
            table.push(color_of(b) as u8);
        }
        Ok(table)
    }

    pub fn table(&self, label: &FunctionLabel) -> Result<Vec<u8>> {
        let CounterexampleParams { c, n, k, .. } = self.params;
        let color_ok = |x: usize| (1..=c).contains(&x);
        let q_ok = |q: usize| (1..=n).contains(&q);
        let bad = || Error::InvalidParameter(format!("label {label} out of range"));
        Ok(match *label {
            FunctionLabel::Const { i } => {
                if !color_ok(i) {
                    return Err(bad());
                }
                vec![i as u8; self.g.n()]
            }
            FunctionLabel::F => self.gamma.map.iter().map(|&(a, _)| a as u8).collect(),
            FunctionLabel::H3 { q, j } => {
                if !q_ok(q) || !color_ok(j) {
                    return Err(bad());
                }
                self.two_valued(q, j, self.alpha_reach(q, 1)?)
            }
            FunctionLabel::H4 { q, d, i, j } => {
                if !q_ok(q) || !color_ok(i) || !color_ok(j) || d == 0 {
                    return Err(bad());
                }
                self.two_valued(i, j, self.alpha_reach(q, d)?)
            }
            FunctionLabel::G3 { q, j } => {
                if !q_ok(q) || !color_ok(j) || self.params.variant != Variant::C7 {
                    return Err(bad());
                }
                let xs = minority_colors(q, n, k);
                self.class_indexed(q, j, q, |b| xs[b - 1])?
            }
            FunctionLabel::G4 { q, i } => {
                if !q_ok(q) || !color_ok(i) {
                    return Err(bad());
                }
                match self.params.variant {
                    Variant::C5Refined => {
                        let selector = match self.reading {
                            SelectorReading::ClassQ => q,
                            SelectorReading::ClassOne => 1,
                        };
                        self.class_indexed(q, i, selector, |b| cyclic_shift(q, b - 1, n))?
                    }
                    Variant::C5Wide => self.class_indexed(q, i, q, |b| b)?,
                    Variant::C7 => return Err(bad()),
                }
            }
        })
    }

    pub fn vertex(&self, label: FunctionLabel) -> Result<FunctionVertex> {
        Ok(FunctionVertex {
            table: self.table(&label)?,
            label,
        })
    }
}

/// The `q` family for one variant, tables included.
pub fn build_special_family(ctx: &TableContext, q: usize) -> Result<Vec<FunctionVertex>> {
    family_labels(&ctx.params, q)
        .into_iter()
        .map(|l| ctx.vertex(l))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers() {
        assert_eq!(cyclic_shift(1, 2, 3), 3);
        assert_eq!(cyclic_shift(2, 2, 3), 1);
        assert_eq!(cyclic_shift(3, 0, 3), 3);
        assert_eq!(minority_colors(1, 4, 2), vec![2, 3]);
        assert_eq!(minority_colors(3, 4, 2), vec![1, 2]);
    }

    #[test]
    fn family_sizes() {
        let p = CounterexampleParams::for_variant(Variant::C7);
        assert_eq!(family_labels(&p, 1).len(), 6);
        assert_eq!(all_labels(&p).len(), 32);
        let p = CounterexampleParams::for_variant(Variant::C5Refined);
        assert_eq!(family_labels(&p, 2).len(), 8);
        assert_eq!(all_labels(&p).len(), 30);
        assert_eq!(
            family_labels(&p, 2)[7],
            FunctionLabel::G4 { q: 2, i: 1 }
        );
        let p = CounterexampleParams::for_variant(Variant::C5Wide);
        assert_eq!(family_labels(&p, 1).len(), 2 + 3 + 9 + 16 + 20 + 3);
    }

    #[test]
    fn label_display() {
        assert_eq!(FunctionLabel::H4 { q: 1, d: 2, i: 4, j: 5 }.to_string(), "h^{1,(2)}_{4,5}");
        assert_eq!(FunctionLabel::G3 { q: 2, j: 6 }.to_string(), "g^2_6");
    }
}
