//! Backtracking search for a spanning copy of a triangulation.

use serde::{Deserialize, Serialize};

use super::gnp::BitGraph;
use crate::error::{parameter, Result};
use crate::graph::{Triangulation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    /// `map[x]` is the host vertex playing `T`'s vertex `x`.
    Found(Vec<usize>),
    Absent,
    /// The node budget ran out first.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Placement order and adjacency of `T`, reusable across host graphs.
#[derive(Clone, Debug)]
pub struct Pattern {
    n: usize,
    m: usize,
    order: Vec<usize>,
    /// Earlier positions adjacent to each position.
    parents: Vec<Vec<usize>>,
    /// Later positions adjacent to each position.
    children: Vec<Vec<usize>>,
    degree: Vec<usize>,
    sorted_degrees: Vec<usize>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Pattern {
    /// Starts from a largest-degree vertex and keeps adding the vertex with
    /// the most already-placed neighbours (then larger degree, then smaller
    /// id), so hubs lead and every later vertex is tied to earlier ones.
    pub fn new(t: &Triangulation) -> Result<Self> {
        let n = t.n();
        if n > 64 {
            return Err(parameter(format!("copy search handles n <= 64, got {n}")));
        }
        let degree: Vec<usize> = (0..n as Vertex).map(|v| t.degree(v)).collect();
        let mut placed_nbrs = vec![0usize; n];
        let mut position = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let x = (0..n)
                .filter(|&x| position[x] == usize::MAX)
                .max_by_key(|&x| (placed_nbrs[x], degree[x], std::cmp::Reverse(x)))
                .expect("unplaced vertex");
            position[x] = order.len();
            order.push(x);
            for &y in t.rotation(x as Vertex) {
                placed_nbrs[y as usize] += 1;
            }
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (j, &x) in order.iter().enumerate() {
            for &y in t.rotation(x as Vertex) {
                let py = position[y as usize];
                if py < j {
                    parents[j].push(py);
                } else {
                    children[j].push(py);
                }
            }
        }
        let mut sorted_degrees = degree.clone();
        sorted_degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Pattern { n, m: t.edge_count(), order, parents, children, degree, sorted_degrees, edges: t.edges() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Whether `map` sends every edge of `T` onto an edge of `g` bijectively.
    pub fn verify(&self, g: &BitGraph, map: &[usize]) -> bool {
        let mut seen = vec![false; g.n()];
        map.len() == self.n
            && map.iter().all(|&h| h < g.n() && !std::mem::replace(&mut seen[h], true))
            && self.edges.iter().all(|&(a, b)| g.has_edge(map[a as usize], map[b as usize]))
    }
}

struct Search<'a> {
    pat: &'a Pattern,
    rows: Vec<u64>,
    /// Host vertices of degree at least `T`'s degree at each position.
    fits: Vec<u64>,
    image: Vec<usize>,
    used: u64,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn candidates(&self, j: usize) -> u64 {
        let mut c = self.fits[j] & !self.used;
        for &pj in &self.pat.parents[j] {
            if self.image[pj] != usize::MAX {
                c &= self.rows[self.image[pj]];
            }
        }
        c
    }

    fn run(&mut self, j: usize) -> Option<bool> {
        if j == self.pat.n {
            return Some(true);
        }
        let mut cands = self.candidates(j);
        while cands != 0 {
            let h = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.image[j] = h;
            self.used |= 1 << h;
            // every later neighbour must keep a candidate
            let alive = self.pat.children[j].iter().all(|&c| self.candidates(c) != 0);
            if alive && self.run(j + 1)? {
                return Some(true);
            }
            self.used &= !(1 << h);
            self.image[j] = usize::MAX;
        }
        Some(false)
    }
}

/// Whether `g` has a spanning subgraph isomorphic to `T`, searching at most
/// `budget` placements.
pub fn contains_copy(g: &BitGraph, pat: &Pattern, budget: u64) -> Result<SearchResult> {
    let n = pat.n;
    if g.n() != n {
        return Err(parameter(format!("host has {} vertices, pattern {n}", g.n())));
    }
    let absent = SearchResult { outcome: SearchOutcome::Absent, nodes: 0 };
    if g.edge_count() < pat.m {
        return Ok(absent);
    }
    let host_degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut sorted = host_degree.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.iter().zip(&pat.sorted_degrees).any(|(h, t)| h < t) {
        return Ok(absent);
    }
    let rows: Vec<u64> = (0..n).map(|v| g.row(v)[0]).collect();
    let fits: Vec<u64> = pat
        .order
        .iter()
        .map(|&x| (0..n).filter(|&h| host_degree[h] >= pat.degree[x]).fold(0, |m, h| m | 1 << h))
        .collect();
    let mut s = Search { pat, rows, fits, image: vec![usize::MAX; n], used: 0, nodes: 0, budget };
    let outcome = match s.run(0) {
        None => SearchOutcome::Inconclusive,
        Some(false) => SearchOutcome::Absent,
        Some(true) => {
            let mut map = vec![0; n];
            for (j, &x) in pat.order.iter().enumerate() {
                map[x] = s.image[j];
            }
            debug_assert!(pat.verify(g, &map));
            SearchOutcome::Found(map)
        }
    };
    Ok(SearchResult { outcome, nodes: s.nodes })
}
