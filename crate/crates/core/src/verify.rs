//! Exhaustive checks of the density and isoperimetric inequalities behind
//! each construction, with violation witnesses.
//!
//! Every inequality is compared in integer or rational arithmetic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::ControlFlow;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{is_canonical, nested_layout, two_ring_layout};
use crate::cycles::{for_each_simple_cycle, Sides};
use crate::edgeset::EdgeSet;
use crate::error::{parameter, Result};
use crate::fragments::{
    for_each_connected, for_each_connected_vertex_set, Enumerator, Fragment, FragmentContext, Visitor,
};
use crate::graph::{IndexedGraph, Regime, Triangulation, Vertex};

pub type Q = Ratio<i64>;

/// Witnesses kept per report; further violations are only counted.
pub const MAX_WITNESSES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fragment: Option<Fragment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTally {
    pub condition: String,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub n: usize,
    pub k: usize,
    pub parameters: BTreeMap<String, String>,
    pub conditions: Vec<ConditionTally>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    pub aborted: bool,
    pub passed: bool,
}

impl VerificationReport {
    fn new(suite: &str, t: &Triangulation, conditions: &[&str]) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            n: t.n(),
            k: t.k(),
            parameters: BTreeMap::new(),
            conditions: conditions
                .iter()
                .map(|c| ConditionTally { condition: c.to_string(), checked: 0, violations: 0 })
                .collect(),
            violations: Vec::new(),
            notes: Vec::new(),
            aborted: false,
            passed: false,
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    fn record(&mut self, cond: usize, ok: bool, witness: impl FnOnce() -> Violation) {
        let tally = &mut self.conditions[cond];
        tally.checked += 1;
        if !ok {
            tally.violations += 1;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(witness());
            }
        }
    }

    fn absorb(&mut self, part: Partial) {
        for (tally, (checked, violations)) in self.conditions.iter_mut().zip(part.tallies) {
            tally.checked += checked;
            tally.violations += violations;
        }
        for w in part.witnesses {
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(w);
            }
        }
    }

    fn finish(mut self) -> Self {
        self.passed = !self.aborted && self.total_violations() == 0;
        self
    }

    pub fn total_checked(&self) -> u64 {
        self.conditions.iter().map(|c| c.checked).sum()
    }

    pub fn total_violations(&self) -> u64 {
        self.conditions.iter().map(|c| c.violations).sum()
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionTally> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-root share of an edge-subset sweep, merged in root order.
struct Partial {
    tallies: Vec<(u64, u64)>,
    witnesses: Vec<Violation>,
}

impl Partial {
    fn new(conditions: usize) -> Self {
        Partial { tallies: vec![(0, 0); conditions], witnesses: Vec::new() }
    }

    fn record(&mut self, cond: usize, ok: bool, witness: impl FnOnce() -> Violation) {
        self.tallies[cond].0 += 1;
        if !ok {
            self.tallies[cond].1 += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }
}

/// Runs one visitor per root vertex (in parallel) and merges the results in
/// root order. Each root may use the whole budget; the sweep counts as
/// aborted if any root ran out or the total exceeds it.
fn sweep_roots<V, M>(
    report: &mut VerificationReport,
    graph: &IndexedGraph,
    max_edges: usize,
    budget: u64,
    make: M,
) where
    V: Visitor + Into<Partial>,
    M: Fn() -> V + Sync,
{
    let results: Vec<(Partial, u64, bool)> = (0..graph.n() as Vertex)
        .into_par_iter()
        .map(|root| {
            let mut visitor = make();
            let stats = Enumerator::new(graph, max_edges, budget).with_floor(root).run(root, &mut visitor);
            (visitor.into(), stats.visited, stats.aborted)
        })
        .collect();
    let mut visited = 0u64;
    for (part, v, aborted) in results {
        visited = visited.saturating_add(v);
        report.aborted |= aborted;
        report.absorb(part);
    }
    if visited > budget {
        report.aborted = true;
    }
    if report.aborted {
        report.notes.push(format!("enumeration budget of {budget} fragments exhausted"));
    }
    report.param("fragments", visited);
}

fn fragment_witness(ctx: &FragmentContext, set: &EdgeSet, condition: &str, detail: String) -> Violation {
    Violation { condition: condition.to_string(), detail, fragment: Some(ctx.params(set)), cycle: None }
}

/// Parameters of the density condition `v(I) >= |I|/q + 1 + eps` for
/// `|I| <= delta*n` (and `v(I) >= |I|/q + 1` beyond).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityParams {
    pub q: Q,
    pub eps: Q,
    pub delta: Q,
}

impl DensityParams {
    /// `q = 3 - k/n`, with `(eps, delta) = (2/5, 1/2)` for two-ring
    /// triangulations and `(1/9, 8/9)` otherwise.
    pub fn default_for(t: &Triangulation) -> Self {
        let q = Q::from(3) - Q::new(t.k() as i64, t.n() as i64);
        if t.regime() == Regime::TwoRing {
            DensityParams { q, eps: Q::new(2, 5), delta: Q::new(1, 2) }
        } else {
            DensityParams { q, eps: Q::new(1, 9), delta: Q::new(8, 9) }
        }
    }

    /// Whether a connected fragment with `i` edges on `v` vertices breaks the
    /// condition in a triangulation on `n` vertices.
    pub fn violated(&self, i: usize, v: usize, n: usize) -> bool {
        let (i, v) = (Q::from(i as i64), Q::from(v as i64));
        let small = i <= self.delta * Q::from(n as i64);
        let need = i / self.q + Q::from(1) + if small { self.eps } else { Q::from(0) };
        v < need
    }
}

fn density_report(t: &Triangulation, params: &DensityParams, max_edges: usize) -> Result<VerificationReport> {
    if params.q <= Q::from(0) {
        return Err(parameter("q must be positive"));
    }
    let mut report = VerificationReport::new("density", t, &["density"]);
    report.param("q", params.q);
    report.param("eps", params.eps);
    report.param("delta", params.delta);
    report.param("max_edges", max_edges);
    Ok(report)
}

/// Density condition over all connected fragments with at most `max_edges`
/// edges.
///
/// Fragments are grouped by vertex set: a connected vertex set `V` carries
/// connected spanning fragments of every size from `|V|-1` up to the number
/// of edges it induces, and for fixed `v` the condition only gets harder as
/// `|I|` grows (within each side of the `delta*n` switch). So each `V` is
/// checked at its largest admissible size on each side. Vertex sets too large
/// to violate the condition with at most `max_edges` edges are skipped.
pub fn check_density_condition(
    t: &Triangulation,
    params: &DensityParams,
    max_edges: usize,
    budget: u64,
) -> Result<VerificationReport> {
    let mut report = density_report(t, params, max_edges)?;
    let ctx = FragmentContext::new(t)?;
    let n = t.n();
    let largest = (2..=max_edges + 1)
        .filter(|&v| (v - 1..=max_edges).any(|i| i >= 1 && params.violated(i, v, n)))
        .max()
        .unwrap_or(0);
    report.param("largest_vertex_set", largest);
    let split = (params.delta * Q::from(n as i64)).floor().to_integer().max(0) as usize;
    let (sets, aborted) = for_each_connected_vertex_set(ctx.graph(), largest, budget, |vs, induced| {
        let v = vs.len();
        let top = induced.min(max_edges);
        let mut sizes = vec![top];
        if split < top && split + 1 >= v {
            sizes.push(split);
        }
        for i in sizes {
            let bad = params.violated(i, v, n);
            report.record(0, !bad, || {
                let set = spanning_fragment(ctx.graph(), vs, i);
                fragment_witness(&ctx, &set, "density", format!("v = {v} with {i} edges"))
            });
        }
        ControlFlow::Continue(())
    });
    report.aborted = aborted;
    report.param("vertex_sets", sets);
    report.notes.push(format!(
        "fragments grouped by vertex set; sets with more than {largest} vertices cannot violate the bound with at most {max_edges} edges"
    ));
    if aborted {
        report.notes.push(format!("enumeration budget of {budget} vertex sets exhausted"));
    }
    Ok(report.finish())
}

/// Same condition, evaluated on every connected edge subset individually.
/// Far slower; kept as an independent route for cross-checking.
pub fn check_density_condition_exhaustive(
    t: &Triangulation,
    params: &DensityParams,
    max_edges: usize,
    budget: u64,
) -> Result<VerificationReport> {
    let mut report = density_report(t, params, max_edges)?;
    let ctx = FragmentContext::new(t)?;
    let n = t.n();
    let mut check = |set: &EdgeSet, v: usize| {
        let i = set.len();
        report.record(0, !params.violated(i, v, n), || {
            fragment_witness(&ctx, set, "density", format!("v = {v} with {i} edges"))
        });
        ControlFlow::Continue(())
    };
    let stats = for_each_connected(ctx.graph(), max_edges, budget, &mut check);
    report.aborted = stats.aborted;
    report.param("fragments", stats.visited);
    Ok(report.finish())
}

/// A connected fragment with `size` edges spanning the connected set `vs`:
/// a BFS tree topped up with induced edges in id order.
fn spanning_fragment(g: &IndexedGraph, vs: &[Vertex], size: usize) -> EdgeSet {
    let members: BTreeSet<Vertex> = vs.iter().copied().collect();
    let mut set = EdgeSet::new();
    let mut reached = BTreeSet::from([vs[0]]);
    let mut queue = VecDeque::from([vs[0]]);
    while let Some(u) = queue.pop_front() {
        for &(x, id) in g.adj(u) {
            if members.contains(&x) && reached.insert(x) {
                set.insert(id);
                queue.push_back(x);
            }
        }
    }
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        if set.len() >= size {
            break;
        }
        if members.contains(&a) && members.contains(&b) {
            set.insert(id);
        }
    }
    set
}

/// Cycle inequality `(len - 1/3)/v >= k/n` over all simple cycles of length
/// at most `k-1`, `v` counting the vertices of the disk they bound. On the
/// canonical nested construction also checks, for every arc that leaves
/// the innermost cycle and returns to it, the arc density
/// `(len + 2/3)/v >= k/n`, the size bound `v <= (w+1)h + (w+2)r/k + 1` and
/// the length bound `len >= w + h - 1`, with width `w` and height `h`
/// measured on the ring/angle lattice.
pub fn check_isoperimetric_nested(t: &Triangulation, budget: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "nested",
        t,
        &["cycle-isoperimetry", "arc-density", "arc-size", "arc-length", "arc-angles-consecutive"],
    );
    let (n, k) = (t.n() as i64, t.k() as i64);
    let mut sides = Sides::new(t)?;
    let stats = for_each_simple_cycle(t, t.k() - 1, budget, |cycle| {
        let info = sides.info(cycle);
        let (len, v) = (info.len as i64, info.v_inside as i64);
        report.record(0, (3 * len - 1) * n >= 3 * k * v, || Violation {
            condition: "cycle-isoperimetry".into(),
            detail: format!("length {len}, {v} vertices inside"),
            fragment: None,
            cycle: Some(cycle.to_vec()),
        });
        ControlFlow::Continue(())
    });
    report.aborted |= stats.aborted;
    report.param("cycles", stats.cycles);
    if t.regime() == Regime::Nested && is_canonical(t) {
        check_nested_arcs(t, &mut sides, &mut report, budget)?;
    } else {
        report.notes.push("not the canonical nested construction: lattice arc checks skipped".into());
    }
    if report.aborted {
        report.notes.push(format!("cycle budget of {budget} exhausted"));
    }
    Ok(report.finish())
}

fn check_nested_arcs(
    t: &Triangulation,
    sides: &mut Sides,
    report: &mut VerificationReport,
    budget: u64,
) -> Result<()> {
    let layout = nested_layout(t.n(), t.k())?;
    let (n, k, r) = (t.n() as i64, t.k() as i64, layout.r as i64);
    let inner = &layout.inner_cycle;
    let p = inner.len();
    let mut pos = vec![usize::MAX; t.n()];
    for (j, &v) in inner.iter().enumerate() {
        pos[v as usize] = j;
    }
    let inner_faces: BTreeSet<usize> = sides.disk(inner).faces.into_iter().collect();
    let adj: Vec<Vec<Vertex>> = (0..t.n() as Vertex)
        .map(|v| {
            let mut a = t.rotation(v).to_vec();
            a.sort_unstable();
            a
        })
        .collect();
    let max_len = t.k().saturating_sub(2);
    let mut arcs = 0u64;
    let mut on_path = vec![false; t.n()];

    let mut measure = |path: &[Vertex], report: &mut VerificationReport| {
        let (a, b) = (path[0], *path.last().unwrap());
        let (pa, pb) = (pos[a as usize], pos[b as usize]);
        // close the arc along either side of the innermost cycle
        let forward: Vec<Vertex> = (1..(pa + p - pb) % p).map(|d| inner[(pb + d) % p]).collect();
        let backward: Vec<Vertex> = (1..(pb + p - pa) % p).map(|d| inner[(pb + p - d) % p]).collect();
        let mut chosen = None;
        for closing in [forward, backward] {
            let cycle: Vec<Vertex> = path.iter().copied().chain(closing).collect();
            let disk = sides.disk(&cycle);
            if !disk.faces.iter().any(|f| inner_faces.contains(f)) {
                chosen = Some((cycle, disk));
                break;
            }
        }
        let Some((cycle, disk)) = chosen else {
            report.notes.push(format!("arc {path:?} encloses the inner disk on both sides"));
            return;
        };
        let len = (path.len() - 1) as i64;
        let v = disk.vertices.len() as i64;
        let angles: BTreeSet<usize> = disk.vertices.iter().filter_map(|&x| layout.angle[x as usize]).collect();
        let w = angles.len() as i64 - 1;
        let h = path.iter().map(|&x| layout.ring[x as usize]).collect::<BTreeSet<_>>().len() as i64;
        let consecutive = angles.len() == t.k()
            || angles.iter().filter(|&&y| !angles.contains(&((y + 1) % t.k()))).count() == 1;
        let witness = |name: &str, detail: String| Violation {
            condition: name.to_string(),
            detail,
            fragment: None,
            cycle: Some(cycle.clone()),
        };
        let desc = format!("arc length {len}, v = {v}, w = {w}, h = {h}");
        report.record(1, (3 * len + 2) * n >= 3 * k * v, || witness("arc-density", desc.clone()));
        report.record(2, k * v <= k * (w + 1) * h + (w + 2) * r + k, || witness("arc-size", desc.clone()));
        report.record(3, len >= w + h - 1, || witness("arc-length", desc.clone()));
        report.record(4, consecutive, || witness("arc-angles-consecutive", format!("angles {angles:?}")));
    };

    #[allow(clippy::too_many_arguments)]
    fn walk<F: FnMut(&[Vertex], &mut VerificationReport)>(
        adj: &[Vec<Vertex>],
        pos: &[usize],
        max_len: usize,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        arcs: &mut u64,
        budget: u64,
        report: &mut VerificationReport,
        measure: &mut F,
    ) -> ControlFlow<()> {
        let last = *path.last().unwrap();
        for &x in &adj[last as usize] {
            if on_path[x as usize] {
                continue;
            }
            let on_inner = pos[x as usize] != usize::MAX;
            if on_inner {
                if path.len() >= 2 && x > path[0] {
                    if *arcs >= budget {
                        report.aborted = true;
                        return ControlFlow::Break(());
                    }
                    *arcs += 1;
                    path.push(x);
                    measure(path, report);
                    path.pop();
                }
            } else if path.len() < max_len {
                on_path[x as usize] = true;
                path.push(x);
                let flow = walk(adj, pos, max_len, path, on_path, arcs, budget, report, measure);
                path.pop();
                on_path[x as usize] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    for &a in inner {
        let mut path = vec![a];
        on_path[a as usize] = true;
        let flow = walk(&adj, &pos, max_len, &mut path, &mut on_path, &mut arcs, budget, report, &mut measure);
        on_path[a as usize] = false;
        if flow.is_break() {
            break;
        }
    }
    report.param("arcs", arcs);
    Ok(())
}

/// Cycle inequality `(len - 1)/t >= k/s` over all simple cycles of length at
/// most `k-1` with `t > 0` vertices strictly inside; on the canonical
/// two-ring construction also checks that every arc of `w` consecutive
/// inner-cycle vertices has at least `w*k/s` boundary neighbours.
pub fn check_isoperimetric_two_ring(t: &Triangulation, budget: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("two-ring", t, &["inner-isoperimetry", "hub-expansion"]);
    let (k, s) = (t.k() as i64, t.s() as i64);
    if s == 0 {
        return Err(parameter("two-ring checks need internal vertices"));
    }
    let mut sides = Sides::new(t)?;
    let stats = for_each_simple_cycle(t, t.k() - 1, budget, |cycle| {
        let info = sides.info(cycle);
        if info.t_inside > 0 {
            let (len, inside) = (info.len as i64, info.t_inside as i64);
            report.record(0, (len - 1) * s >= k * inside, || Violation {
                condition: "inner-isoperimetry".into(),
                detail: format!("length {len}, {inside} vertices strictly inside"),
                fragment: None,
                cycle: Some(cycle.to_vec()),
            });
        }
        ControlFlow::Continue(())
    });
    report.aborted |= stats.aborted;
    report.param("cycles", stats.cycles);
    if t.regime() == Regime::TwoRing && is_canonical(t) {
        let hubs = two_ring_layout(t.n(), t.k())?.hubs;
        let su = hubs.len();
        for w in 1..=su {
            let starts = if w == su { 1 } else { su };
            for start in 0..starts {
                let arc: Vec<Vertex> = (0..w).map(|d| hubs[(start + d) % su]).collect();
                let outer: BTreeSet<Vertex> = arc
                    .iter()
                    .flat_map(|&u| t.rotation(u).iter().copied())
                    .filter(|&x| (x as usize) < t.k())
                    .collect();
                let got = outer.len() as i64;
                report.record(1, got * s >= w as i64 * k, || Violation {
                    condition: "hub-expansion".into(),
                    detail: format!("arc {arc:?} has {got} boundary neighbours"),
                    fragment: None,
                    cycle: None,
                });
            }
        }
    } else {
        report.notes.push("not the canonical two-ring construction: hub expansion skipped".into());
    }
    if report.aborted {
        report.notes.push(format!("cycle budget of {budget} exhausted"));
    }
    Ok(report.finish())
}

/// Incremental state for the K4 suite.
struct K4Sweep<'a> {
    ctx: &'a FragmentContext,
    cliques_of_edge: &'a [Vec<usize>],
    present: Vec<u8>,
    r: usize,
    b_t: i64,
    part: Partial,
}

impl Visitor for K4Sweep<'_> {
    fn enter(&mut self, set: &EdgeSet, edge: usize, _fresh: Option<Vertex>, v: usize) -> ControlFlow<()> {
        for &q in &self.cliques_of_edge[edge] {
            self.present[q] += 1;
            if self.present[q] == 6 {
                self.r += 1;
            }
        }
        let (i, v, r) = (set.len() as i64, v as i64, self.r as i64);
        let ctx = self.ctx;
        let desc = || format!("i = {i}, v = {v}, r = {r}");
        self.part.record(0, i <= 2 * v + r - 3, || fragment_witness(ctx, set, "k4-edge-bound", desc()));
        if r > 0 {
            self.part.record(1, 2 * i >= (r - 1) * self.b_t, || {
                fragment_witness(ctx, set, "k4-separation", desc())
            });
        } else {
            self.part.record(2, i <= 2 * v - 3, || fragment_witness(ctx, set, "two-degenerate", desc()));
        }
        ControlFlow::Continue(())
    }

    fn leave(&mut self, edge: usize, _fresh: Option<Vertex>) {
        for &q in &self.cliques_of_edge[edge] {
            if self.present[q] == 6 {
                self.r -= 1;
            }
            self.present[q] -= 1;
        }
    }
}

impl From<K4Sweep<'_>> for Partial {
    fn from(s: K4Sweep<'_>) -> Partial {
        s.part
    }
}

fn bfs_distances(t: &Triangulation, sources: &[Vertex]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; t.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s as usize] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &x in t.rotation(u) {
            if dist[x as usize] == usize::MAX {
                dist[x as usize] = dist[u as usize] + 1;
                queue.push_back(x);
            }
        }
    }
    dist
}

/// For every connected fragment with at most `max_edges` edges:
/// `|I| <= 2v + r - 3` (`r` counting 4-cliques), `|I| >= (r-1) B/2` when
/// `r > 0` with `B = floor((k-2)/s)`, and `|I| <= 2v - 3` when `r = 0`.
/// Also checks that internal vertices are pairwise at distance `>= B/2`.
/// All three fragment bounds are additive over components, so connected
/// fragments cover every fragment.
pub fn check_k4_regime(t: &Triangulation, max_edges: usize, budget: u64) -> Result<VerificationReport> {
    if t.s() == 0 {
        return Err(parameter("the K4 suite needs internal vertices"));
    }
    let mut report =
        VerificationReport::new("k4", t, &["k4-edge-bound", "k4-separation", "two-degenerate", "centre-distance"]);
    let b_t = ((t.k() - 2) / t.s()) as i64;
    report.param("B", b_t);
    report.param("max_edges", max_edges);
    let ctx = FragmentContext::new(t)?;
    let g = ctx.graph();
    let mut cliques: Vec<[Vertex; 4]> = Vec::new();
    for &(a, b) in g.edges() {
        let common: Vec<Vertex> =
            g.adj(a).iter().map(|&(x, _)| x).filter(|&x| x > b && g.edge_id(b, x).is_some()).collect();
        for (j, &x) in common.iter().enumerate() {
            for &y in &common[j + 1..] {
                if g.edge_id(x, y).is_some() {
                    cliques.push([a, b, x, y]);
                }
            }
        }
    }
    let mut cliques_of_edge = vec![Vec::new(); g.m()];
    for (q, c) in cliques.iter().enumerate() {
        for x in 0..4 {
            for y in x + 1..4 {
                cliques_of_edge[g.edge_id(c[x], c[y]).expect("clique edge")].push(q);
            }
        }
    }
    report.param("cliques", cliques.len());
    sweep_roots(&mut report, g, max_edges, budget, || K4Sweep {
        ctx: &ctx,
        cliques_of_edge: &cliques_of_edge,
        present: vec![0; cliques.len()],
        r: 0,
        b_t,
        part: Partial::new(4),
    });
    let centres = t.internal().to_vec();
    for (j, &x) in centres.iter().enumerate() {
        let dist = bfs_distances(t, &[x]);
        for &y in &centres[j + 1..] {
            let d = dist[y as usize] as i64;
            report.record(3, 2 * d >= b_t, || Violation {
                condition: "centre-distance".into(),
                detail: format!("centres {x} and {y} at distance {d}"),
                fragment: None,
                cycle: None,
            });
        }
    }
    Ok(report.finish())
}

struct WheelSweep<'a> {
    ctx: &'a FragmentContext,
    ell: i64,
    hubs: Vec<Vertex>,
    part: Partial,
}

impl WheelSweep<'_> {
    /// Edges of `I` inside `{u} + N_I(u)`, and the size of that vertex set.
    fn hub_patch(&self, set: &EdgeSet, u: Vertex) -> (i64, i64) {
        let g = self.ctx.graph();
        let nbrs: Vec<Vertex> = g.adj(u).iter().filter(|&&(_, id)| set.contains(id)).map(|&(x, _)| x).collect();
        let mut edges = nbrs.len();
        for (j, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[j + 1..] {
                if g.edge_id(x, y).is_some_and(|id| set.contains(id)) {
                    edges += 1;
                }
            }
        }
        (edges as i64, nbrs.len() as i64 + 1)
    }
}

impl Visitor for WheelSweep<'_> {
    fn enter(&mut self, set: &EdgeSet, _edge: usize, fresh: Option<Vertex>, v: usize) -> ControlFlow<()> {
        if let Some(w) = fresh.filter(|&w| self.ctx.is_internal(w)) {
            self.hubs.push(w);
        }
        let ctx = self.ctx;
        let hub_ts: Vec<(Vertex, i64)> = self.hubs.iter().map(|&u| (u, ctx.t_of(set, u) as i64)).collect();
        let t: i64 = hub_ts.iter().map(|&(_, x)| x).sum();
        let (i, v) = (set.len() as i64, v as i64);
        let meets = !self.hubs.is_empty();
        let desc = || format!("i = {i}, v = {v}, t = {t}, meets internal = {meets}");
        self.part.record(0, 2 * v >= i + 2 + (!meets) as i64 + t, || {
            fragment_witness(ctx, set, "wheel-vertex-bound", desc())
        });
        for &(u, tu) in &hub_ts {
            let (edges, verts) = self.hub_patch(set, u);
            self.part.record(1, edges <= 2 * verts - 2 - tu, || {
                fragment_witness(ctx, set, "hub-neighbourhood-bound", format!("hub {u}: {edges} edges on {verts} vertices, t = {tu}"))
            });
        }
        if meets && t == 0 {
            self.part.record(2, i >= 2 * self.ell, || fragment_witness(ctx, set, "complete-wheel-count", desc()));
        }
        ControlFlow::Continue(())
    }

    fn leave(&mut self, _edge: usize, fresh: Option<Vertex>) {
        if fresh.is_some_and(|w| self.ctx.is_internal(w)) {
            self.hubs.pop();
        }
    }
}

impl From<WheelSweep<'_>> for Partial {
    fn from(s: WheelSweep<'_>) -> Partial {
        s.part
    }
}

/// For every connected fragment with at most `max_edges` edges:
/// `v >= i/2 + 1 + [no internal vertex]/2 + t/2`, the per-hub bound
/// `|I(u)| <= 2 v(I(u)) - 2 - t_I(u)` on the patch spanned by `u` and its
/// `I`-neighbours, and `i >= 2*ell` whenever every touched hub has its whole
/// wheel in `I`. Also checks that distinct wheels are `>= ell/2` apart.
/// The fragment bounds are additive over components.
pub fn check_wheel_regime(t: &Triangulation, max_edges: usize, budget: u64) -> Result<VerificationReport> {
    if t.s() == 0 {
        return Err(parameter("the wheel suite needs internal vertices"));
    }
    let mut report = VerificationReport::new(
        "wheel",
        t,
        &["wheel-vertex-bound", "hub-neighbourhood-bound", "complete-wheel-count", "wheel-distance"],
    );
    let ell = t.internal().iter().map(|&u| t.degree(u)).max().unwrap_or(0) as i64;
    report.param("ell", ell);
    report.param("max_edges", max_edges);
    let ctx = FragmentContext::new(t)?;
    sweep_roots(&mut report, ctx.graph(), max_edges, budget, || WheelSweep {
        ctx: &ctx,
        ell,
        hubs: Vec::new(),
        part: Partial::new(4),
    });
    let hubs = t.internal().to_vec();
    for (j, &x) in hubs.iter().enumerate() {
        let dist = bfs_distances(t, t.rotation(x));
        for &y in &hubs[j + 1..] {
            let d = t.rotation(y).iter().map(|&z| dist[z as usize]).min().unwrap_or(usize::MAX) as i64;
            report.record(3, 2 * d >= ell, || Violation {
                condition: "wheel-distance".into(),
                detail: format!("rims of {x} and {y} at distance {d}"),
                fragment: None,
                cycle: None,
            });
        }
    }
    Ok(report.finish())
}

/// Suite selector used by the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Nested,
    TwoRing,
    K4,
    Wheel,
    Density,
}

impl std::str::FromStr for Suite {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nested" => Suite::Nested,
            "two-ring" => Suite::TwoRing,
            "k4" => Suite::K4,
            "wheel" => Suite::Wheel,
            "density" => Suite::Density,
            other => return Err(parameter(format!("unknown suite '{other}'"))),
        })
    }
}

pub fn run_suite(t: &Triangulation, suite: Suite, max_edges: usize, budget: u64) -> Result<VerificationReport> {
    match suite {
        Suite::Nested => check_isoperimetric_nested(t, budget),
        Suite::TwoRing => check_isoperimetric_two_ring(t, budget),
        Suite::K4 => check_k4_regime(t, max_edges, budget),
        Suite::Wheel => check_wheel_regime(t, max_edges, budget),
        Suite::Density => check_density_condition(t, &DensityParams::default_for(t), max_edges, budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        construct_k4_sprinkle, construct_nested, construct_two_ring, construct_wheel_chain, wheel_layout,
    };

    #[test]
    fn density_arithmetic() {
        let t = construct_nested(14, 7).unwrap();
        let p = DensityParams::default_for(&t);
        assert_eq!(p.q, Q::new(5, 2));
        // a triangle: 3 >= 3/2.5 + 1 + 1/9
        assert!(!p.violated(3, 3, 14));
        assert!(!p.violated(1, 2, 14));
    }

    #[test]
    fn nested_suites_pass() {
        for (n, k) in [(14, 7), (14, 4), (6, 3), (11, 4)] {
            let t = construct_nested(n, k).unwrap();
            let rep = check_isoperimetric_nested(&t, u64::MAX).unwrap();
            assert!(rep.passed, "({n},{k}) {:?}", rep.violations);
            let rep = check_density_condition(&t, &DensityParams::default_for(&t), 8, u64::MAX).unwrap();
            assert!(rep.passed, "({n},{k}) {:?}", rep.violations);
        }
    }

    #[test]
    fn two_routes_agree_on_density() {
        let tight = DensityParams { q: Q::from(2), eps: Q::new(1, 9), delta: Q::new(8, 9) };
        for t in [
            construct_k4_sprinkle(17, 14).unwrap(),
            construct_nested(9, 4).unwrap(),
            construct_two_ring(11, 7).unwrap(),
        ] {
            for params in [DensityParams::default_for(&t), tight] {
                let fast = check_density_condition(&t, &params, 6, u64::MAX).unwrap();
                let slow = check_density_condition_exhaustive(&t, &params, 6, u64::MAX).unwrap();
                assert_eq!(fast.passed, slow.passed);
                let sets = |r: &VerificationReport| -> BTreeSet<Vec<Vertex>> {
                    r.violations
                        .iter()
                        .map(|w| {
                            let f = w.fragment.as_ref().unwrap();
                            let mut vs: Vec<Vertex> = f.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                            vs.sort_unstable();
                            vs.dedup();
                            vs
                        })
                        .collect()
                };
                if fast.total_violations() < MAX_WITNESSES as u64 && slow.total_violations() < MAX_WITNESSES as u64 {
                    assert_eq!(sets(&fast), sets(&slow));
                }
            }
        }
    }

    #[test]
    fn k4_is_a_density_violation_for_small_q() {
        let t = construct_k4_sprinkle(17, 14).unwrap();
        let params = DensityParams { q: Q::from(2), eps: Q::new(1, 9), delta: Q::new(8, 9) };
        let rep = check_density_condition(&t, &params, 6, u64::MAX).unwrap();
        assert!(!rep.passed);
        assert!(rep.violations.iter().any(|w| w.fragment.as_ref().unwrap().r == 1));
    }

    #[test]
    fn two_ring_suite_passes() {
        for (n, k) in [(11, 9), (14, 10), (5, 4), (13, 7)] {
            let t = construct_two_ring(n, k).unwrap();
            let rep = check_isoperimetric_two_ring(&t, u64::MAX).unwrap();
            assert!(rep.passed, "({n},{k}) {:?}", rep.violations);
        }
    }

    #[test]
    fn k4_suite_passes_and_is_tight_on_a_clique() {
        let t = construct_k4_sprinkle(17, 14).unwrap();
        let rep = check_k4_regime(&t, 7, u64::MAX).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        assert_eq!(rep.parameters["B"], "4");
    }

    #[test]
    fn wheel_suite_passes() {
        let t = construct_wheel_chain(20, 18).unwrap();
        let rep = check_wheel_regime(&t, 7, u64::MAX).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
    }

    #[test]
    fn two_full_wheels_with_their_block_break_the_vertex_bound() {
        // W1 + B1 + W2 is a triangulated disk with two interior vertices, so
        // it has 2v - 1 edges: beyond 2v - 2 - t with t = 0.
        let t = construct_wheel_chain(20, 18).unwrap();
        let layout = wheel_layout(20, 18).unwrap();
        let ell = layout.ell;
        let mut region: BTreeSet<Vertex> = layout.rims.iter().flatten().copied().collect();
        region.extend(layout.hubs.iter().copied());
        let rim0: BTreeSet<Vertex> = layout.rims[0].iter().copied().collect();
        // the block vertices hanging off the first rim
        let mut stack: Vec<Vertex> = (0..20)
            .filter(|v| !region.contains(v) && t.rotation(*v).iter().any(|x| rim0.contains(x)))
            .collect();
        let mut block = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if block.insert(v) {
                stack.extend(t.rotation(v).iter().copied().filter(|x| !region.contains(x)));
            }
        }
        assert_eq!(block.len(), ell);
        region.extend(block);
        let pairs: Vec<(Vertex, Vertex)> =
            t.edges().into_iter().filter(|(a, b)| region.contains(a) && region.contains(b)).collect();
        let ctx = FragmentContext::new(&t).unwrap();
        let f = ctx.params(&ctx.edge_set(&pairs).unwrap());
        assert_eq!((f.v, f.i, f.t, f.c), (3 * ell + 2, 6 * ell + 3, 0, 1));
        assert!(2 * f.v < f.i + 2 + f.t);
        assert!(f.i > 12);
    }
}
