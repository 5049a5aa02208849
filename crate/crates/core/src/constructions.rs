//! Graph families and operators: complete graphs, cycles, Kneser graphs,
//! walk powers, walk neighbourhoods, lexicographic and tensor products, and
//! the two explicit constructions of the right adjoint of the walk power.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Family {
    Complete { n: usize },
    Cycle { n: usize },
    Kneser { c: usize, k: usize },
}

pub fn make_family(family: Family) -> Result<Graph> {
    match family {
        Family::Complete { n } => complete(n),
        Family::Cycle { n } => cycle(n),
        Family::Kneser { c, k } => kneser(c, k),
    }
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let g = Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))?;
    Ok(g.with_label(format!("K{n}")))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
    }
    let g = Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))?;
    Ok(g.with_label(format!("C{n}")))
}

/// `k`-subsets of `1..=c` in lexicographic order, each as a sorted list.
pub fn k_subsets(c: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, c: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=c {
            if c - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, c, k, &mut Vec::new(), &mut out);
    out
}

/// Kneser graph: `k`-subsets of `[c]`, adjacent when disjoint.
pub fn kneser(c: usize, k: usize) -> Result<Graph> {
    if k == 0 || c < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "kneser graph needs k >= 1 and c >= 2k (got c={c}, k={k})"
        )));
    }
    let subsets = k_subsets(c, k);
    let masks: Vec<u64> = subsets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &x| m | 1 << x))
        .collect();
    let mut edges = Vec::new();
    for (i, a) in masks.iter().enumerate() {
        for (j, b) in masks.iter().enumerate().skip(i + 1) {
            if a & b == 0 {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::new(subsets.len(), edges)?.with_label(format!("KG({c},{k})")))
}

/// Walk power: `uv` is an edge iff some walk of length exactly `d` joins
/// `u` and `v` (`u == v` gives a loop). Materializes `n` bitset rows.
pub fn gamma_power(g: &Graph, d: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidParameter("walk length must be >= 1".into()));
    }
    let n = g.n();
    let base: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut rows = base.clone();
    for _ in 1..d {
        rows = rows
            .par_iter()
            .map(|row| {
                let mut next = VertexSet::new(n);
                for v in row {
                    next.union_with(&base[v]);
                }
                next
            })
            .collect();
    }
    Ok(Graph::from_set_rows(&rows))
}

/// Vertices reachable from `s` by a walk of length exactly `d`.
pub fn n_exact(g: &Graph, s: &VertexSet, d: usize) -> VertexSet {
    let mut frontier = s.clone();
    for _ in 0..d {
        frontier = g.neighborhood(&frontier);
    }
    frontier
}

/// All of `N^{=t}(s)` for `t = 0..=d`, in order.
pub fn n_exact_layers(g: &Graph, s: &VertexSet, d: usize) -> Vec<VertexSet> {
    let mut layers = Vec::with_capacity(d + 1);
    layers.push(s.clone());
    for t in 0..d {
        let next = g.neighborhood(&layers[t]);
        layers.push(next);
    }
    layers
}

/// Vertices reachable from `s` by a walk of length at most `d`.
pub fn n_upto(g: &Graph, s: &VertexSet, d: usize) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for layer in n_exact_layers(g, s, d) {
        out.union_with(&layer);
    }
    out
}

/// Lexicographic product `G[H]`; vertex `(g, h)` has index `g * |V(H)| + h`.
pub fn lex_product(g: &Graph, h: &Graph) -> Graph {
    let m = h.n();
    let rows = (0..g.n() * m)
        .map(|idx| {
            let (a, b) = (idx / m, idx % m);
            let mut row: Vec<u32> = Vec::new();
            for &a2 in g.neighbor_slice(a) {
                row.extend((0..m).map(|b2| (a2 as usize * m + b2) as u32));
            }
            row.extend(h.neighbor_slice(b).iter().map(|&b2| (a * m) as u32 + b2));
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// Tensor (categorical) product; vertex `(g, h)` has index `g * |V(H)| + h`.
pub fn tensor_product(g: &Graph, h: &Graph) -> Graph {
    let m = h.n();
    let rows = (0..g.n() * m)
        .map(|idx| {
            let (a, b) = (idx / m, idx % m);
            let mut row = Vec::new();
            for &a2 in g.neighbor_slice(a) {
                for &b2 in h.neighbor_slice(b) {
                    row.push(a2 * m as u32 + b2);
                }
            }
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// A vertex of the tuple construction: `x_i` in `0..=d+1`, exactly one zero,
/// at least one one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OmegaVertex(pub Vec<u8>);

impl OmegaVertex {
    /// 0-based index of the unique zero coordinate.
    pub fn zero_position(&self) -> usize {
        self.0
            .iter()
            .position(|&x| x == 0)
            .expect("omega tuple without a zero coordinate")
    }

    pub fn is_valid(&self, d: usize) -> bool {
        self.0.iter().filter(|&&x| x == 0).count() == 1
            && self.0.contains(&1)
            && self.0.iter().all(|&x| x as usize <= d + 1)
    }
}

/// Tuple construction of the walk-power adjoint of `K_n` with half-width `d`
/// (walk length `2d + 1`), with its vertex table.
#[derive(Clone, Debug)]
pub struct OmegaTuples {
    pub graph: Graph,
    pub n: usize,
    pub d: usize,
    pub tuples: Vec<OmegaVertex>,
}

/// `n * ((d+1)^(n-1) - d^(n-1))`.
pub fn omega_vertex_count(n: usize, d: usize) -> usize {
    n * ((d + 1).pow(n as u32 - 1) - d.pow(n as u32 - 1))
}

const OMEGA_CODE_LIMIT: usize = 1 << 26;

pub fn omega_tuples(n: usize, d: usize) -> Result<OmegaTuples> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParameter(format!(
            "omega_tuples needs n >= 2 and d >= 1 (got n={n}, d={d})"
        )));
    }
    let radix = d + 2;
    let space = radix
        .checked_pow(n as u32)
        .filter(|&s| s <= OMEGA_CODE_LIMIT)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("tuple space {radix}^{n} too large"))
        })?;

    let decode = |mut code: usize| -> Vec<u8> {
        let mut x = vec![0u8; n];
        for i in (0..n).rev() {
            x[i] = (code % radix) as u8;
            code /= radix;
        }
        x
    };
    // Codes are big-endian in x_1, so increasing code order is lexicographic.
    let mut index = vec![u32::MAX; space];
    let mut tuples = Vec::new();
    for code in 0..space {
        let x = OmegaVertex(decode(code));
        if x.is_valid(d) {
            index[code] = tuples.len() as u32;
            tuples.push(x);
        }
    }
    let expected = omega_vertex_count(n, d);
    if tuples.len() != expected {
        return Err(Error::Internal(format!(
            "omega_tuples({n},{d}) enumerated {} vertices, formula gives {expected}",
            tuples.len()
        )));
    }

    let top = (d + 1) as u8;
    let rows: Vec<Vec<u32>> = tuples
        .par_iter()
        .map(|x| {
            // Per coordinate, the values y_i compatible with x_i.
            let choices: Vec<Vec<u8>> = x
                .0
                .iter()
                .map(|&xi| {
                    let mut c = Vec::with_capacity(2);
                    if xi > 0 {
                        c.push(xi - 1);
                    }
                    if xi < top {
                        c.push(xi + 1);
                    }
                    if xi == top {
                        c.push(top);
                    }
                    c
                })
                .collect();
            let mut row = Vec::new();
            let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
            while let Some((i, code)) = stack.pop() {
                if i == n {
                    let j = index[code];
                    if j != u32::MAX {
                        row.push(j);
                    }
                    continue;
                }
                for &y in &choices[i] {
                    stack.push((i + 1, code * radix + y as usize));
                }
            }
            row
        })
        .collect();
    let graph = Graph::from_rows(rows).with_label(format!("Omega_{}(K{n})", 2 * d + 1));
    Ok(OmegaTuples { graph, n, d, tuples })
}

/// A vertex of the set construction: `(A_0, ..., A_d)`, subsets of `V(H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OmegaSetVertex(pub Vec<Vec<usize>>);

#[derive(Clone, Copy, Debug)]
pub struct SetsGuard {
    pub max_host_vertices: usize,
    pub max_d: usize,
}

impl Default for SetsGuard {
    fn default() -> Self {
        SetsGuard {
            max_host_vertices: 5,
            max_d: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OmegaSets {
    pub graph: Graph,
    pub d: usize,
    pub sets: Vec<OmegaSetVertex>,
}

pub fn omega_sets(h: &Graph, d: usize) -> Result<OmegaSets> {
    omega_sets_guarded(h, d, SetsGuard::default())
}

/// Set construction of the walk-power adjoint of `h` with half-width `d`.
/// Exponential in `|V(h)|` and `d`; bounded by `guard`.
pub fn omega_sets_guarded(h: &Graph, d: usize, guard: SetsGuard) -> Result<OmegaSets> {
    if h.n() > guard.max_host_vertices {
        return Err(Error::SizeGuard {
            n: h.n(),
            limit: guard.max_host_vertices,
        });
    }
    if d == 0 || d > guard.max_d {
        return Err(Error::InvalidParameter(format!(
            "omega_sets half-width must be in 1..={} (got {d})",
            guard.max_d
        )));
    }
    let m = h.n();
    let nbr: Vec<u32> = (0..m)
        .map(|v| h.neighbor_slice(v).iter().fold(0u32, |a, &u| a | 1 << u))
        .collect();
    let all = if m == 0 { 0 } else { (1u32 << m) - 1 };
    // Vertices fully adjacent to every member of `a`.
    let common = |a: u32| -> u32 {
        (0..m)
            .filter(|&v| a >> v & 1 == 1)
            .fold(all, |acc, v| acc & nbr[v])
    };
    let fully_adjacent = |a: u32, b: u32| b & !common(a) == 0;

    let mut verts: Vec<Vec<u32>> = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(d + 1);
    fn rec(
        d: usize,
        all: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        fully_adjacent: &dyn Fn(u32, u32) -> bool,
    ) {
        let i = cur.len();
        if i == d + 1 {
            if fully_adjacent(cur[d - 1], cur[d]) {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=all {
            let ok = match i {
                0 => a.count_ones() == 1,
                1 => a != 0,
                _ => cur[i - 2] & !a == 0,
            };
            if ok {
                cur.push(a);
                rec(d, all, cur, out, fully_adjacent);
                cur.pop();
            }
        }
    }
    rec(d, all, &mut cur, &mut verts, &fully_adjacent);

    let adjacent = |a: &[u32], b: &[u32]| -> bool {
        (0..d).all(|i| a[i] & !b[i + 1] == 0 && b[i] & !a[i + 1] == 0)
            && fully_adjacent(a[d], b[d])
    };
    let mut edges = Vec::new();
    for (i, a) in verts.iter().enumerate() {
        for (j, b) in verts.iter().enumerate().skip(i) {
            if adjacent(a, b) {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::new(verts.len(), edges)?;
    let sets = verts
        .iter()
        .map(|t| {
            OmegaSetVertex(
                t.iter()
                    .map(|&a| (0..m).filter(|&v| a >> v & 1 == 1).collect())
                    .collect(),
            )
        })
        .collect();
    Ok(OmegaSets { graph, d, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    #[test]
    fn named_families() {
        let k6 = complete(6).unwrap();
        assert_eq!((k6.n(), k6.edge_count()), (6, 15));
        let petersen = kneser(5, 2).unwrap();
        assert_eq!((petersen.n(), petersen.edge_count()), (10, 15));
        assert_eq!(k_subsets(4, 2)[..3], [vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert!(cycle(2).is_err());
        assert!(complete(0).is_err());
        assert!(kneser(3, 2).is_err());
        assert_eq!(
            make_family(Family::Cycle { n: 7 }).unwrap(),
            cycle(7).unwrap()
        );
    }

    #[test]
    fn first_power_is_identity() {
        for g in [cycle(5).unwrap(), kneser(5, 2).unwrap(), complete(4).unwrap()] {
            assert_eq!(gamma_power(&g, 1).unwrap(), g);
        }
    }

    #[test]
    fn cube_of_c5_is_k5() {
        // C5 cubed: distance-1 and distance-3 walks cover all pairs, no closed 3-walks.
        let p = gamma_power(&cycle(5).unwrap(), 3).unwrap();
        assert!(!p.has_loops());
        assert!(is_isomorphic(&p, &complete(5).unwrap()).unwrap());
    }

    #[test]
    fn fifth_power_of_c5_is_looped() {
        let p = gamma_power(&cycle(5).unwrap(), 5).unwrap();
        assert!((0..5).all(|v| p.has_loop(v)));
    }

    #[test]
    fn walk_neighbourhoods() {
        let c6 = cycle(6).unwrap();
        assert_eq!(n_exact(&c6, &set(6, &[0]), 2), set(6, &[0, 2, 4]));
        let k2 = complete(2).unwrap();
        assert_eq!(n_exact(&k2, &set(2, &[0]), 3), set(2, &[1]));
        assert_eq!(n_exact(&c6, &set(6, &[0]), 0), set(6, &[0]));
        assert_eq!(n_upto(&c6, &set(6, &[0]), 1), set(6, &[0, 1, 5]));
        // isolated vertices are allowed; they simply vanish after one step
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(n_exact(&g, &set(3, &[2]), 1).is_empty());
    }

    #[test]
    fn products() {
        let k1 = complete(1).unwrap();
        let c5 = cycle(5).unwrap();
        assert!(is_isomorphic(&lex_product(&k1, &c5), &c5).unwrap());
        let k3k2 = lex_product(&complete(3).unwrap(), &complete(2).unwrap());
        assert!(is_isomorphic(&k3k2, &complete(6).unwrap()).unwrap());

        let k2 = complete(2).unwrap();
        let t = tensor_product(&k2, &k2);
        assert_eq!((t.n(), t.edge_count()), (4, 2));
        assert!(t.has_edge(0, 3) && t.has_edge(1, 2));

        let looped = Graph::new(1, [(0, 0)]).unwrap();
        assert!(is_isomorphic(&tensor_product(&c5, &looped), &c5).unwrap());
    }

    #[test]
    fn small_omega_tuples() {
        let o = omega_tuples(2, 1).unwrap();
        assert_eq!(o.tuples, vec![OmegaVertex(vec![0, 1]), OmegaVertex(vec![1, 0])]);
        assert!(is_isomorphic(&o.graph, &complete(2).unwrap()).unwrap());
        assert_eq!(omega_tuples(4, 1).unwrap().graph.n(), 28);
        assert!(omega_tuples(1, 1).is_err());
        assert!(omega_tuples(3, 0).is_err());
    }

    #[test]
    fn omega_sets_of_k2_is_k2() {
        let o = omega_sets(&complete(2).unwrap(), 1).unwrap();
        assert!(is_isomorphic(&o.graph, &complete(2).unwrap()).unwrap());
        assert_eq!(o.sets[0], OmegaSetVertex(vec![vec![0], vec![1]]));
    }

    #[test]
    fn omega_sets_guard() {
        assert!(matches!(
            omega_sets(&complete(6).unwrap(), 1),
            Err(Error::SizeGuard { n: 6, limit: 5 })
        ));
        assert!(omega_sets(&complete(3).unwrap(), 4).is_err());
    }
}
