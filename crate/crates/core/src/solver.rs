//! Exact decision procedures: k-colorability, homomorphism existence,
//! chromatic number, and witness verification.
//!
//! Searches are deterministic and return a three-valued verdict. A search
//! that runs out of budget reports `Exhausted`, never `Infeasible`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    /// Wall-clock limit in seconds; `None` means unlimited.
    pub max_secs: Option<u64>,
    /// Pre-colour a greedy maximal clique before branching.
    pub clique_precolor: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_secs: Some(600),
            clique_precolor: true,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 || self.max_secs == Some(0) {
            return Err(Error::InvalidParameter("search budget limits must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "witness")]
pub enum Verdict<T> {
    Found(T),
    Infeasible,
    Exhausted,
}

impl<T> Verdict<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Found(_) => VerdictKind::Found,
            Verdict::Infeasible => VerdictKind::Infeasible,
            Verdict::Exhausted => VerdictKind::Exhausted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Found,
    Infeasible,
    Exhausted,
}

/// Result of one search: the verdict plus the number of search nodes visited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome<T> {
    pub verdict: Verdict<T>,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub graph_hash: String,
    pub colors: usize,
    /// Colour of each vertex, in `1..=colors`.
    pub map: Vec<usize>,
    #[serde(default)]
    pub verified: bool,
}

impl Coloring {
    pub fn new(g: &Graph, colors: usize, map: Vec<usize>) -> Coloring {
        Coloring {
            graph_hash: g.hash(),
            colors,
            map,
            verified: false,
        }
    }

    /// Runs `verify_coloring` and records the result.
    pub fn verify(mut self, g: &Graph) -> Result<Coloring> {
        self.verified = verify_coloring(g, &self)?;
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub source_hash: String,
    pub target_hash: String,
    pub map: Vec<usize>,
}

/// Checks totality and range, then that no edge is monochromatic (a loop
/// always is).
pub fn verify_coloring(g: &Graph, coloring: &Coloring) -> Result<bool> {
    is_proper_coloring(g, &coloring.map, coloring.colors)
}

pub fn is_proper_coloring(g: &Graph, map: &[usize], colors: usize) -> Result<bool> {
    check_map(map, g.n(), 1, colors)?;
    Ok(g.edges().all(|(u, v)| map[u] != map[v]))
}

pub fn verify_homomorphism(g: &Graph, h: &Graph, map: &[usize]) -> Result<bool> {
    check_map(map, g.n(), 0, h.n().saturating_sub(1))?;
    if h.n() == 0 && g.n() > 0 {
        return Ok(false);
    }
    Ok(g.edges().all(|(u, v)| h.has_edge(map[u], map[v])))
}

fn check_map(map: &[usize], n: usize, lo: usize, hi: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::MapLength {
            got: map.len(),
            expected: n,
        });
    }
    if let Some((vertex, &value)) = map.iter().enumerate().find(|(_, &x)| x < lo || x > hi) {
        return Err(Error::MapValue {
            vertex,
            value,
            limit: hi,
        });
    }
    Ok(())
}

struct Meter {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Meter {
    fn new(budget: &SearchBudget) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget
                .max_secs
                .map(|s| Instant::now() + Duration::from_secs(s)),
        }
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                return Instant::now() < d;
            }
        }
        true
    }
}

/// Greedy maximal clique: start at the highest-degree vertex, repeatedly add
/// the highest-degree common neighbour. Ties go to the lowest index.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let Some(start) = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))) else {
        return Vec::new();
    };
    let mut clique = vec![start];
    let mut cand = g.neighbors(start);
    cand.remove(start);
    while let Some(v) = cand
        .iter()
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
    {
        clique.push(v);
        let mut nv = g.neighbors(v);
        nv.remove(v);
        cand.intersect_with(&nv);
    }
    clique
}

const UNCOLORED: usize = usize::MAX;

/// Decides whether `g` has a proper `colors`-colouring by DSATUR branching.
///
/// Branch vertex: maximum saturation, then maximum degree, then lowest index.
/// Colours are tried in increasing order and at most one previously unused
/// colour is tried per node.
pub fn find_coloring(g: &Graph, colors: usize, budget: &SearchBudget) -> SearchOutcome<Coloring> {
    let n = g.n();
    let done = |verdict, nodes| SearchOutcome { verdict, nodes };
    if g.has_loops() || (colors == 0 && n > 0) {
        return done(Verdict::Infeasible, 0);
    }
    if n == 0 {
        return done(Verdict::Found(Coloring::new(g, colors, Vec::new())), 0);
    }

    let mut color = vec![UNCOLORED; n];
    // count[v * colors + c]: neighbours of v coloured c
    let mut count = vec![0u32; n * colors];
    let mut sat = vec![0usize; n];
    let mut uncolored = n;

    let assign = |v: usize, c: usize, color: &mut Vec<usize>, count: &mut Vec<u32>, sat: &mut Vec<usize>| {
        color[v] = c;
        for &u in g.neighbor_slice(v) {
            let slot = &mut count[u as usize * colors + c];
            *slot += 1;
            if *slot == 1 {
                sat[u as usize] += 1;
            }
        }
    };
    let unassign = |v: usize, color: &mut Vec<usize>, count: &mut Vec<u32>, sat: &mut Vec<usize>| {
        let c = color[v];
        color[v] = UNCOLORED;
        for &u in g.neighbor_slice(v) {
            let slot = &mut count[u as usize * colors + c];
            *slot -= 1;
            if *slot == 0 {
                sat[u as usize] -= 1;
            }
        }
    };

    let mut used = 0usize;
    if budget.clique_precolor {
        let clique = greedy_clique(g);
        if clique.len() > colors {
            return done(Verdict::Infeasible, 0);
        }
        for (c, &v) in clique.iter().enumerate() {
            assign(v, c, &mut color, &mut count, &mut sat);
            uncolored -= 1;
        }
        used = clique.len();
    }

    struct Frame {
        v: usize,
        next: usize,
        used_before: usize,
    }
    let mut meter = Meter::new(budget);
    let mut stack: Vec<Frame> = Vec::new();

    let select = |color: &[usize], sat: &[usize]| -> usize {
        let mut best = UNCOLORED;
        let mut key = (0usize, 0usize);
        for v in 0..n {
            if color[v] == UNCOLORED {
                let k = (sat[v], g.degree(v));
                if best == UNCOLORED || k > key {
                    best = v;
                    key = k;
                }
            }
        }
        best
    };

    'search: loop {
        if uncolored == 0 {
            let map = color.iter().map(|&c| c + 1).collect();
            let col = Coloring::new(g, colors, map);
            let ok = verify_coloring(g, &col).unwrap_or(false);
            assert!(ok, "DSATUR produced an improper colouring");
            return done(
                Verdict::Found(Coloring { verified: true, ..col }),
                meter.nodes,
            );
        }
        let v = select(&color, &sat);
        stack.push(Frame {
            v,
            next: 0,
            used_before: used,
        });

        // Advance the top frame to its next colour, popping exhausted frames.
        loop {
            let Some(top) = stack.last_mut() else {
                return done(Verdict::Infeasible, meter.nodes);
            };
            let v = top.v;
            if color[v] != UNCOLORED {
                unassign(v, &mut color, &mut count, &mut sat);
                uncolored += 1;
                used = top.used_before;
            }
            let limit = colors.min(top.used_before + 1);
            let mut chosen = None;
            while top.next < limit {
                let c = top.next;
                top.next += 1;
                if count[v * colors + c] == 0 {
                    chosen = Some(c);
                    break;
                }
            }
            match chosen {
                Some(c) => {
                    if !meter.tick() {
                        return done(Verdict::Exhausted, meter.nodes);
                    }
                    assign(v, c, &mut color, &mut count, &mut sat);
                    uncolored -= 1;
                    used = used.max(c + 1);
                    continue 'search;
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
}

/// Decides `g -> h` by backtracking with forward checking over candidate
/// sets, branching on the unmapped vertex with the fewest candidates.
pub fn find_homomorphism(g: &Graph, h: &Graph, budget: &SearchBudget) -> SearchOutcome<Homomorphism> {
    let wrap = |map: Vec<usize>| Homomorphism {
        source_hash: g.hash(),
        target_hash: h.hash(),
        map,
    };
    let n = g.n();
    if n == 0 {
        return SearchOutcome {
            verdict: Verdict::Found(wrap(Vec::new())),
            nodes: 0,
        };
    }
    let m = h.n();
    let h_rows: Vec<VertexSet> = (0..m).map(|x| h.neighbors(x)).collect();
    let looped = VertexSet::from_vertices(m, (0..m).filter(|&x| h.has_loop(x)));
    let domains: Vec<VertexSet> = (0..n)
        .map(|v| {
            if g.has_loop(v) {
                looped.clone()
            } else {
                VertexSet::full(m)
            }
        })
        .collect();

    struct Ctx<'a> {
        g: &'a Graph,
        h_rows: &'a [VertexSet],
        map: Vec<usize>,
        meter: Meter,
    }
    enum Step {
        Done,
        Fail,
        Out,
    }
    fn rec(ctx: &mut Ctx, domains: &[VertexSet], left: usize) -> Step {
        if left == 0 {
            return Step::Done;
        }
        let v = (0..domains.len())
            .filter(|&v| ctx.map[v] == UNCOLORED)
            .min_by_key(|&v| (domains[v].len(), v))
            .unwrap();
        for x in domains[v].iter() {
            if !ctx.meter.tick() {
                return Step::Out;
            }
            let mut next = domains.to_vec();
            let mut dead = false;
            for &u in ctx.g.neighbor_slice(v) {
                let u = u as usize;
                if u != v && ctx.map[u] == UNCOLORED {
                    next[u].intersect_with(&ctx.h_rows[x]);
                    if next[u].is_empty() {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            ctx.map[v] = x;
            match rec(ctx, &next, left - 1) {
                Step::Fail => ctx.map[v] = UNCOLORED,
                other => return other,
            }
        }
        Step::Fail
    }

    if domains.iter().any(|d| d.is_empty()) {
        return SearchOutcome {
            verdict: Verdict::Infeasible,
            nodes: 0,
        };
    }
    let mut ctx = Ctx {
        g,
        h_rows: &h_rows,
        map: vec![UNCOLORED; n],
        meter: Meter::new(budget),
    };
    let step = rec(&mut ctx, &domains, n);
    let nodes = ctx.meter.nodes;
    let verdict = match step {
        Step::Done => {
            assert!(
                verify_homomorphism(g, h, &ctx.map).unwrap_or(false),
                "homomorphism search produced an invalid map"
            );
            Verdict::Found(wrap(ctx.map))
        }
        Step::Fail => Verdict::Infeasible,
        Step::Out => Verdict::Exhausted,
    };
    SearchOutcome { verdict, nodes }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ChromaticNumber {
    /// Smallest colour count in range admitting a colouring.
    Value(usize),
    /// Every count in range was proved infeasible.
    AboveRange(usize),
    /// Some decision in range ran out of budget.
    Unknown,
    /// A looped graph has no proper colouring at all.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticReport {
    pub result: ChromaticNumber,
    /// `(colours, verdict, nodes)` for every decision made.
    pub decisions: Vec<(usize, VerdictKind, u64)>,
    pub witness: Option<Coloring>,
}

pub fn chromatic_number(g: &Graph, lo: usize, hi: usize, budget: &SearchBudget) -> Result<ChromaticReport> {
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty range {lo}..={hi}")));
    }
    let mut decisions = Vec::new();
    if g.has_loops() {
        return Ok(ChromaticReport {
            result: ChromaticNumber::Infinite,
            decisions,
            witness: None,
        });
    }
    for c in lo..=hi {
        let out = find_coloring(g, c, budget);
        decisions.push((c, out.verdict.kind(), out.nodes));
        match out.verdict {
            Verdict::Found(col) => {
                return Ok(ChromaticReport {
                    result: ChromaticNumber::Value(c),
                    decisions,
                    witness: Some(col),
                })
            }
            Verdict::Infeasible => {}
            Verdict::Exhausted => {
                return Ok(ChromaticReport {
                    result: ChromaticNumber::Unknown,
                    decisions,
                    witness: None,
                })
            }
        }
    }
    Ok(ChromaticReport {
        result: ChromaticNumber::AboveRange(hi),
        decisions,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, kneser, lex_product, omega_tuples};

    fn budget() -> SearchBudget {
        SearchBudget::nodes(10_000_000)
    }

    #[test]
    fn odd_cycle() {
        let c5 = cycle(5).unwrap();
        assert_eq!(find_coloring(&c5, 2, &budget()).verdict, Verdict::Infeasible);
        match find_coloring(&c5, 3, &budget()).verdict {
            Verdict::Found(col) => assert!(col.verified && verify_coloring(&c5, &col).unwrap()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let p = kneser(5, 2).unwrap();
        assert_eq!(find_coloring(&p, 2, &budget()).verdict, Verdict::Infeasible);
        assert!(find_coloring(&p, 3, &budget()).verdict.is_found());
        let r = chromatic_number(&p, 1, 5, &budget()).unwrap();
        assert_eq!(r.result, ChromaticNumber::Value(3));
    }

    #[test]
    fn chromatic_numbers() {
        let b = budget();
        let k6 = complete(6).unwrap();
        assert_eq!(chromatic_number(&k6, 1, 8, &b).unwrap().result, ChromaticNumber::Value(6));
        let lex = lex_product(&cycle(5).unwrap(), &complete(2).unwrap());
        assert_eq!(chromatic_number(&lex, 1, 6, &b).unwrap().result, ChromaticNumber::Value(5));
        let o = omega_tuples(4, 1).unwrap();
        assert_eq!(chromatic_number(&o.graph, 1, 5, &b).unwrap().result, ChromaticNumber::Value(4));
        assert_eq!(chromatic_number(&k6, 1, 3, &b).unwrap().result, ChromaticNumber::AboveRange(3));
        let looped = Graph::new(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(chromatic_number(&looped, 1, 3, &b).unwrap().result, ChromaticNumber::Infinite);
        assert!(chromatic_number(&k6, 4, 3, &b).is_err());
    }

    #[test]
    fn loops_are_never_colourable() {
        let g = Graph::new(3, [(0, 1), (2, 2)]).unwrap();
        for c in 1..5 {
            assert_eq!(find_coloring(&g, c, &budget()).verdict, Verdict::Infeasible);
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let g = omega_tuples(4, 1).unwrap().graph;
        let tiny = SearchBudget {
            max_nodes: 3,
            max_secs: None,
            clique_precolor: false,
        };
        let out = find_coloring(&g, 3, &tiny);
        assert_eq!(out.verdict, Verdict::Exhausted);
        assert!(find_homomorphism(&g, &complete(3).unwrap(), &tiny).verdict == Verdict::Exhausted);
    }

    #[test]
    fn search_is_deterministic() {
        let g = kneser(7, 2).unwrap();
        let a = find_coloring(&g, 5, &budget());
        let b = find_coloring(&g, 5, &budget());
        assert_eq!(a, b);
        let a = find_homomorphism(&g, &complete(5).unwrap(), &budget());
        let b = find_homomorphism(&g, &complete(5).unwrap(), &budget());
        assert_eq!(a, b);
    }

    #[test]
    fn homomorphisms() {
        let b = budget();
        let c5 = cycle(5).unwrap();
        let k3 = complete(3).unwrap();
        assert!(find_homomorphism(&c5, &k3, &b).verdict.is_found());
        assert_eq!(find_homomorphism(&k3, &c5, &b).verdict, Verdict::Infeasible);
        let looped = Graph::new(2, [(0, 1), (1, 1)]).unwrap();
        let petersen = kneser(5, 2).unwrap();
        match find_homomorphism(&petersen, &looped, &b).verdict {
            Verdict::Found(h) => assert!(verify_homomorphism(&petersen, &looped, &h.map).unwrap()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn verification() {
        let c5 = cycle(5).unwrap();
        let good = Coloring::new(&c5, 3, vec![1, 2, 1, 2, 3]);
        let bad = Coloring::new(&c5, 3, vec![1, 2, 1, 2, 1]);
        assert!(verify_coloring(&c5, &good).unwrap());
        assert!(!verify_coloring(&c5, &bad).unwrap());
        assert!(good.clone().verify(&c5).unwrap().verified);
        let short = Coloring::new(&c5, 3, vec![1, 2]);
        assert!(matches!(verify_coloring(&c5, &short), Err(Error::MapLength { .. })));
        let range = Coloring::new(&c5, 3, vec![1, 2, 1, 2, 4]);
        assert!(matches!(verify_coloring(&c5, &range), Err(Error::MapValue { vertex: 4, .. })));

        let id: Vec<usize> = (0..5).collect();
        assert!(verify_homomorphism(&c5, &c5, &id).unwrap());
        assert!(!verify_homomorphism(&c5, &complete(5).unwrap(), &[0, 0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn greedy_clique_is_a_clique() {
        let g = lex_product(&cycle(5).unwrap(), &complete(2).unwrap());
        let q = greedy_clique(&g);
        assert_eq!(q.len(), 4);
        for (i, &a) in q.iter().enumerate() {
            for &b in &q[i + 1..] {
                assert!(g.has_edge(a, b));
            }
        }
    }
}
