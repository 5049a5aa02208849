//! Isomorphism testing for small graphs.
//!
//! Vertices are first partitioned by colour refinement run jointly on both
//! graphs, then a backtracking search extends a partial bijection one vertex
//! at a time, checking adjacency (and non-adjacency) against every vertex
//! already mapped.

use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_ISO_LIMIT: usize = 200;

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    is_isomorphic_with_limit(g, h, DEFAULT_ISO_LIMIT)
}

pub fn is_isomorphic_with_limit(g: &Graph, h: &Graph, limit: usize) -> Result<bool> {
    Ok(find_isomorphism(g, h, limit)?.is_some())
}

/// Returns a bijection `V(g) -> V(h)` preserving edges and non-edges.
pub fn find_isomorphism(g: &Graph, h: &Graph, limit: usize) -> Result<Option<Vec<usize>>> {
    for x in [g, h] {
        if x.n() > limit {
            return Err(Error::SizeGuard { n: x.n(), limit });
        }
    }
    if g.n() != h.n()
        || g.edge_count() != h.edge_count()
        || g.loop_count() != h.loop_count()
        || g.degree_sequence() != h.degree_sequence()
    {
        return Ok(None);
    }
    let n = g.n();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let (cg, ch) = refine(g, h);
    let mut hist_g = BTreeMap::new();
    let mut hist_h = BTreeMap::new();
    for &c in &cg {
        *hist_g.entry(c).or_insert(0usize) += 1;
    }
    for &c in &ch {
        *hist_h.entry(c).or_insert(0usize) += 1;
    }
    if hist_g != hist_h {
        return Ok(None);
    }

    let order = search_order(g, &cg, &hist_g);
    let rows_g: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v)).collect();
    let rows_h: Vec<VertexSet> = (0..n).map(|v| h.neighbors(v)).collect();
    let mut state = Search {
        order: &order,
        rows_g: &rows_g,
        rows_h: &rows_h,
        cg: &cg,
        ch: &ch,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    Ok(if state.extend(0) { Some(state.map) } else { None })
}

/// Joint colour refinement; colour ids are comparable across both graphs.
fn refine(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let init = |x: &Graph| -> Vec<usize> {
        (0..x.n())
            .map(|v| x.degree(v) * 2 + x.has_loop(v) as usize)
            .collect()
    };
    let mut cg = init(g);
    let mut ch = init(h);
    let mut classes = usize::MAX;
    loop {
        let sig = |x: &Graph, c: &[usize]| -> Vec<(usize, Vec<usize>)> {
            (0..x.n())
                .map(|v| {
                    let mut nb: Vec<usize> =
                        x.neighbor_slice(v).iter().map(|&u| c[u as usize]).collect();
                    nb.sort_unstable();
                    (c[v], nb)
                })
                .collect()
        };
        let sg = sig(g, &cg);
        let sh = sig(h, &ch);
        let mut ids = BTreeMap::new();
        for s in sg.iter().chain(&sh) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        cg = sg.iter().map(|s| ids[s]).collect();
        ch = sh.iter().map(|s| ids[s]).collect();
        if ids.len() == classes {
            return (cg, ch);
        }
        classes = ids.len();
    }
}

fn search_order(g: &Graph, colors: &[usize], hist: &BTreeMap<usize, usize>) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (std::cmp::Reverse(links[v]), hist[&colors[v]], v))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &u in g.neighbor_slice(v) {
            links[u as usize] += 1;
        }
    }
    order
}

struct Search<'a> {
    order: &'a [usize],
    rows_g: &'a [VertexSet],
    rows_h: &'a [VertexSet],
    cg: &'a [usize],
    ch: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for x in 0..self.ch.len() {
            if self.used[x] || self.ch[x] != self.cg[v] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                self.rows_g[v].contains(u) == self.rows_h[x].contains(self.map[u])
            });
            if !consistent {
                continue;
            }
            self.map[v] = x;
            self.used[x] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[x] = false;
        }
        self.map[v] = usize::MAX;
        false
    }
}
