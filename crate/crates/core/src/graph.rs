//! Immutable undirected graphs on dense vertex indices `0..n`.
//!
//! Loops are first-class: `v` may appear in its own neighbor list, and a loop
//! counts as a single edge. Multi-edges are collapsed on construction.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitset::VertexSet;
use crate::dimacs;
use crate::error::{Error, Result};

#[derive(Clone, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Sorted, deduplicated neighbor lists; `v` is in `adj[v]` iff `v` is looped.
    adj: Vec<Vec<u32>>,
    edges: usize,
    label: Option<String>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs `(v, v)` become loops.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        assert!(n <= u32::MAX as usize);
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            adj[u].push(v as u32);
            if u != v {
                adj[v].push(u as u32);
            }
        }
        Ok(Graph::from_rows(adj))
    }

    /// Builds a graph from per-vertex neighbor lists that are already
    /// symmetric. Lists are sorted and deduplicated here.
    pub(crate) fn from_rows(mut adj: Vec<Vec<u32>>) -> Graph {
        let mut twice = 0;
        let mut loops = 0;
        for (v, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            twice += row.len();
            if row.binary_search(&(v as u32)).is_ok() {
                loops += 1;
            }
        }
        Graph {
            n: adj.len(),
            edges: (twice - loops) / 2 + loops,
            adj,
            label: None,
        }
    }

    /// Builds a graph from bitset rows; symmetry is the caller's contract.
    pub(crate) fn from_set_rows(rows: &[VertexSet]) -> Graph {
        Graph::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| v as u32).collect())
                .collect(),
        )
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_rows(vec![Vec::new(); n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Graph {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    #[inline]
    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn loop_count(&self) -> usize {
        (0..self.n).filter(|&v| self.has_loop(v)).count()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_loop(v))
    }

    /// Number of entries in the neighbor list (a loop contributes one).
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_vertices(self.n, self.adj[v].iter().map(|&u| u as usize))
    }

    /// Union of the neighborhoods of all vertices in `s`.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in s {
            for &u in &self.adj[v] {
                out.insert(u as usize);
            }
        }
        out
    }

    /// Edges as pairs `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v >= u)
                .map(move |v| (u, v))
        })
    }

    pub fn first_isolated_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.adj[v].is_empty())
    }

    /// True iff no edge (loops included) has both endpoints in `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|v| self.adj[v].iter().all(|&u| !s.contains(u as usize)))
    }

    /// Subgraph induced by `s`, re-indexed in increasing order. The returned
    /// map sends old indices to new ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<Option<usize>>)> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if s.capacity() != self.n {
            return Err(Error::InvalidParameter(format!(
                "set over {} vertices used with graph on {}",
                s.capacity(),
                self.n
            )));
        }
        let mut map = vec![None; self.n];
        for (i, v) in s.iter().enumerate() {
            map[v] = Some(i);
        }
        let rows = s
            .iter()
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&u| map[u as usize].map(|x| x as u32))
                    .collect()
            })
            .collect();
        Ok((Graph::from_rows(rows), map))
    }

    /// Checks symmetry, index bounds and the stored edge count.
    pub fn check_invariants(&self) -> bool {
        let mut twice = 0;
        let mut loops = 0;
        for (v, row) in self.adj.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &u in row {
                let u = u as usize;
                if u >= self.n || !self.has_edge(u, v) {
                    return false;
                }
                if u == v {
                    loops += 1;
                }
            }
            twice += row.len();
        }
        self.adj.len() == self.n && self.edges == (twice - loops) / 2 + loops
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// SHA-256 (lowercase hex) of the canonical DIMACS emission.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(dimacs::emit(self).as_bytes()))
    }
}

/// Equality is structural; labels are ignored.
impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .field("label", &self.label)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle};

    #[test]
    fn triangle() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.check_invariants());
        assert_eq!(g.degree_sequence(), vec![2, 2, 2]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn loops() {
        let g = Graph::new(1, [(0, 0)]).unwrap();
        assert!(g.has_edge(0, 0));
        assert_eq!(g.edge_count(), 1);
        assert!(g.neighbors(0).contains(0));
        assert!(!g.is_independent(&VertexSet::from_vertices(1, [0])));
        assert!(g.check_invariants());
    }

    #[test]
    fn out_of_range_endpoint() {
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn neighbors_of_named_graphs() {
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.neighbors(0).iter().collect::<Vec<_>>(), vec![1, 4]);
        let k4 = complete(4).unwrap();
        assert_eq!(k4.neighbors(2).iter().collect::<Vec<_>>(), vec![0, 1, 3]);
    }

    #[test]
    fn independence_on_c5() {
        let c5 = cycle(5).unwrap();
        assert!(c5.is_independent(&VertexSet::from_vertices(5, [0, 2])));
        assert!(!c5.is_independent(&VertexSet::from_vertices(5, [0, 1])));
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = complete(4).unwrap();
        let (k3, map) = k4
            .induced_subgraph(&VertexSet::from_vertices(4, [0, 1, 2]))
            .unwrap();
        assert_eq!(k3, complete(3).unwrap());
        assert_eq!(map, vec![Some(0), Some(1), Some(2), None]);

        let c6 = cycle(6).unwrap();
        let (e3, _) = c6
            .induced_subgraph(&VertexSet::from_vertices(6, [0, 2, 4]))
            .unwrap();
        assert_eq!((e3.n(), e3.edge_count()), (3, 0));

        assert!(matches!(
            c6.induced_subgraph(&VertexSet::new(6)),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn hash_ignores_label() {
        let a = cycle(5).unwrap();
        let b = cycle(5).unwrap().with_label("pentagon");
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
