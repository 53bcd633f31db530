//! Fragments (edge subsets of a triangulation) and their parameters, plus
//! exhaustive enumeration of connected fragments.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::edgeset::{EdgeSet, EDGE_CAPACITY};
use crate::error::{parameter, Error, Result};
use crate::graph::{IndexedGraph, Triangulation, Vertex};

/// Parameters of an edge subset `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fragment {
    pub edges: Vec<(Vertex, Vertex)>,
    pub i: usize,
    pub v: usize,
    pub c: usize,
    /// Components meeting the internal vertices.
    pub c_s: usize,
    /// Internal vertices touched.
    pub g: usize,
    /// 4-cliques contained in `I`.
    pub r: usize,
    /// Sum of rim-arc counts over touched internal vertices.
    pub t: usize,
}

/// Per-component parameters; a fragment's parameters are sums of these.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComponentParams {
    pub i: usize,
    pub v: usize,
    pub meets_s: bool,
    pub g: usize,
    pub r: usize,
    pub t: usize,
    /// Whether some internal vertex has its whole wheel inside the component.
    pub full_wheels: usize,
}

/// Precomputed structure of `T` for fast fragment evaluation.
#[derive(Clone, Debug)]
pub struct FragmentContext {
    graph: IndexedGraph,
    internal: Vec<bool>,
    /// For internal vertices: spokes plus link-cycle edges.
    wheel: Vec<Option<EdgeSet>>,
    /// For internal vertices, in rotation order: the spoke to the `j`-th
    /// neighbour and the link edge from it to the `(j+1)`-th.
    spokes: Vec<Option<Vec<(usize, usize)>>>,
}

impl FragmentContext {
    pub fn new(t: &Triangulation) -> Result<Self> {
        let graph = IndexedGraph::from_triangulation(t);
        if graph.m() > EDGE_CAPACITY {
            return Err(parameter(format!(
                "fragment tools address at most {EDGE_CAPACITY} edges, T has {}",
                graph.m()
            )));
        }
        let mut internal = vec![false; t.n()];
        for &u in t.internal() {
            internal[u as usize] = true;
        }
        let spokes: Vec<Option<Vec<(usize, usize)>>> = (0..t.n() as Vertex)
            .map(|u| {
                if !internal[u as usize] {
                    return Ok(None);
                }
                let rot = t.rotation(u);
                rot.iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let y = rot[(j + 1) % rot.len()];
                        match (graph.edge_id(u, x), graph.edge_id(x, y)) {
                            (Some(a), Some(b)) => Ok((a, b)),
                            _ => Err(parameter(format!("link of internal vertex {u} is not a cycle"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Some)
            })
            .collect::<Result<_>>()?;
        let wheel = spokes
            .iter()
            .map(|sp| sp.as_ref().map(|list| list.iter().flat_map(|&(a, b)| [a, b]).collect()))
            .collect();
        Ok(FragmentContext { graph, internal, wheel, spokes })
    }

    pub fn graph(&self) -> &IndexedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn is_internal(&self, v: Vertex) -> bool {
        self.internal[v as usize]
    }

    /// Edge ids of the given vertex pairs; fails on a pair that is not an edge of `T`.
    pub fn edge_set(&self, pairs: &[(Vertex, Vertex)]) -> Result<EdgeSet> {
        let mut set = EdgeSet::new();
        for &(u, v) in pairs {
            let in_range = (u as usize) < self.n() && (v as usize) < self.n();
            let id = in_range
                .then(|| self.graph.edge_id(u, v))
                .flatten()
                .ok_or_else(|| parameter(format!("{u}-{v} is not an edge of T")))?;
            set.insert(id);
        }
        Ok(set)
    }

    /// `t_I(u)`: zero when the whole wheel of `u` lies in `I`, otherwise the
    /// number of arcs formed on the link cycle of `u` by its `I`-neighbours
    /// and the `I`-edges between consecutive ones.
    pub fn t_of(&self, edges: &EdgeSet, u: Vertex) -> usize {
        let Some(spokes) = &self.spokes[u as usize] else { return 0 };
        let d = spokes.len();
        let on = |j: usize| edges.contains(spokes[j % d].0);
        let mut verts = 0;
        let mut joins = 0;
        for j in 0..d {
            if on(j) {
                verts += 1;
                if on(j + 1) && edges.contains(spokes[j].1) {
                    joins += 1;
                }
            }
        }
        if joins == d {
            0
        } else {
            verts - joins
        }
    }

    fn vertices_of(&self, edges: &EdgeSet) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = edges
            .iter()
            .flat_map(|id| {
                let (a, b) = self.graph.edge(id);
                [a, b]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn k4_count(&self, edges: &EdgeSet, vs: &[Vertex]) -> usize {
        let has = |x: Vertex, y: Vertex| self.graph.edge_id(x, y).is_some_and(|id| edges.contains(id));
        let mut count = 0;
        for id in edges.iter() {
            let (a, b) = self.graph.edge(id);
            let common: Vec<Vertex> = vs.iter().copied().filter(|&w| w > b && has(a, w) && has(b, w)).collect();
            for (x, &w) in common.iter().enumerate() {
                count += common[x + 1..].iter().filter(|&&y| has(w, y)).count();
            }
        }
        count
    }

    /// Splits `edges` into connected components.
    pub fn components(&self, edges: &EdgeSet) -> Vec<EdgeSet> {
        let vs = self.vertices_of(edges);
        let index: BTreeMap<Vertex, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..vs.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for id in edges.iter() {
            let (a, b) = self.graph.edge(id);
            let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            parent[ra] = rb;
        }
        let mut by_root: BTreeMap<usize, EdgeSet> = BTreeMap::new();
        for id in edges.iter() {
            let root = find(&mut parent, index[&self.graph.edge(id).0]);
            by_root.entry(root).or_default().insert(id);
        }
        by_root.into_values().collect()
    }

    /// Parameters of a connected edge set.
    pub fn component_params(&self, edges: &EdgeSet) -> ComponentParams {
        let vs = self.vertices_of(edges);
        let g = vs.iter().filter(|&&v| self.internal[v as usize]).count();
        let mut t = 0;
        let mut full_wheels = 0;
        for &u in vs.iter().filter(|&&v| self.internal[v as usize]) {
            let w = self.wheel[u as usize].as_ref().expect("internal vertex has a wheel");
            if w.is_subset(edges) {
                full_wheels += 1;
            } else {
                t += self.t_of(edges, u);
            }
        }
        ComponentParams {
            i: edges.len(),
            v: vs.len(),
            meets_s: g > 0,
            g,
            r: self.k4_count(edges, &vs),
            t,
            full_wheels,
        }
    }

    pub fn params(&self, edges: &EdgeSet) -> Fragment {
        let comps = self.components(edges);
        let mut f = Fragment {
            edges: edges.iter().map(|id| self.graph.edge(id)).collect(),
            i: 0,
            v: 0,
            c: comps.len(),
            c_s: 0,
            g: 0,
            r: 0,
            t: 0,
        };
        for comp in &comps {
            let p = self.component_params(comp);
            f.i += p.i;
            f.v += p.v;
            f.c_s += p.meets_s as usize;
            f.g += p.g;
            f.r += p.r;
            f.t += p.t;
        }
        f
    }
}

/// Parameters of the edge subset `edges` of `t`.
pub fn fragment_params(t: &Triangulation, edges: &[(Vertex, Vertex)]) -> Result<Fragment> {
    let ctx = FragmentContext::new(t)?;
    let set = ctx.edge_set(edges)?;
    Ok(ctx.params(&set))
}

/// Outcome of a budgeted enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// `counts[i]` is the number of subgraphs with `i` edges (`counts[0] = 0`).
    pub counts: Vec<u64>,
    pub visited: u64,
    pub aborted: bool,
}

/// Callbacks for [`Enumerator`]. `enter` sees the current set right after
/// `edge` was added (`fresh` is the vertex it brought in, if any); `leave`
/// undoes the matching `enter`.
pub trait Visitor {
    fn enter(&mut self, set: &EdgeSet, edge: usize, fresh: Option<Vertex>, nverts: usize) -> ControlFlow<()>;

    fn leave(&mut self, _edge: usize, _fresh: Option<Vertex>) {}
}

impl<F> Visitor for F
where
    F: FnMut(&EdgeSet, usize) -> ControlFlow<()>,
{
    fn enter(&mut self, set: &EdgeSet, _edge: usize, _fresh: Option<Vertex>, nverts: usize) -> ControlFlow<()> {
        self(set, nverts)
    }
}

/// Grows connected edge sets from a root vertex. Every connected edge set
/// containing the root, with all vertices `>= floor`, is produced once: at
/// each level the `idx`-th frontier edge is included and earlier ones are
/// excluded for the whole subtree.
pub struct Enumerator<'a> {
    graph: &'a IndexedGraph,
    floor: Vertex,
    max_edges: usize,
    budget: u64,
    in_set: Vec<bool>,
    edges: EdgeSet,
    stats: EnumerationStats,
}

impl<'a> Enumerator<'a> {
    pub fn new(graph: &'a IndexedGraph, max_edges: usize, budget: u64) -> Self {
        Enumerator {
            graph,
            floor: 0,
            max_edges,
            budget,
            in_set: vec![false; graph.n()],
            edges: EdgeSet::new(),
            stats: EnumerationStats { counts: vec![0; max_edges + 1], ..Default::default() },
        }
    }

    /// Restricts growth to vertices `>= floor`.
    pub fn with_floor(mut self, floor: Vertex) -> Self {
        self.floor = floor;
        self
    }

    pub fn run<V: Visitor>(mut self, root: Vertex, visitor: &mut V) -> EnumerationStats {
        if self.max_edges == 0 {
            return self.stats;
        }
        self.in_set[root as usize] = true;
        let frontier: Vec<usize> = self
            .graph
            .adj(root)
            .iter()
            .filter(|&&(x, _)| x >= self.floor)
            .map(|&(_, id)| id)
            .collect();
        let _ = self.grow(&frontier, 1, visitor);
        self.stats
    }

    fn grow<V: Visitor>(&mut self, frontier: &[usize], nverts: usize, visitor: &mut V) -> ControlFlow<()> {
        let mut next = Vec::with_capacity(frontier.len() + 8);
        for (idx, &id) in frontier.iter().enumerate() {
            if self.stats.visited >= self.budget {
                self.stats.aborted = true;
                return ControlFlow::Break(());
            }
            let (a, b) = self.graph.edge(id);
            let fresh = if !self.in_set[a as usize] {
                Some(a)
            } else if !self.in_set[b as usize] {
                Some(b)
            } else {
                None
            };
            self.edges.insert(id);
            next.clear();
            next.extend_from_slice(&frontier[idx + 1..]);
            if let Some(w) = fresh {
                self.in_set[w as usize] = true;
                for &(x, e) in self.graph.adj(w) {
                    if !self.in_set[x as usize] && x >= self.floor {
                        next.push(e);
                    }
                }
            }
            let nv = nverts + fresh.is_some() as usize;
            self.stats.visited += 1;
            self.stats.counts[self.edges.len()] += 1;
            let mut flow = visitor.enter(&self.edges, id, fresh, nv);
            if flow.is_continue() && self.edges.len() < self.max_edges {
                let owned = std::mem::take(&mut next);
                flow = self.grow(&owned, nv, visitor);
                next = owned;
            }
            visitor.leave(id, fresh);
            if let Some(w) = fresh {
                self.in_set[w as usize] = false;
            }
            self.edges.remove(id);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Connected subgraphs containing `root` with at most `max_edges` edges.
pub fn enumerate_connected_subgraphs<F>(
    t: &Triangulation,
    root: Vertex,
    max_edges: usize,
    budget: u64,
    mut visit: F,
) -> Result<EnumerationStats>
where
    F: FnMut(&[(Vertex, Vertex)]),
{
    if root as usize >= t.n() {
        return Err(parameter(format!("root {root} out of range")));
    }
    let ctx = FragmentContext::new(t)?;
    let g = ctx.graph();
    let mut each = |set: &EdgeSet, _: usize| {
        let pairs: Vec<_> = set.iter().map(|id| g.edge(id)).collect();
        visit(&pairs);
        ControlFlow::Continue(())
    };
    let stats = Enumerator::new(g, max_edges, budget).run(root, &mut each);
    Ok(stats)
}

/// Every connected subgraph of `graph` with at most `max_edges` edges,
/// each once (rooted at its smallest vertex). Roots are independent, so
/// this splits the work per root and merges totals in root order.
pub fn for_each_connected<V: Visitor>(
    graph: &IndexedGraph,
    max_edges: usize,
    budget: u64,
    visitor: &mut V,
) -> EnumerationStats {
    let mut total = EnumerationStats { counts: vec![0; max_edges + 1], ..Default::default() };
    for root in 0..graph.n() as Vertex {
        let remaining = budget.saturating_sub(total.visited);
        let stats = Enumerator::new(graph, max_edges, remaining)
            .with_floor(root)
            .run(root, visitor);
        total.visited += stats.visited;
        for (acc, c) in total.counts.iter_mut().zip(&stats.counts) {
            *acc += c;
        }
        if stats.aborted {
            total.aborted = true;
            break;
        }
    }
    total
}

/// Every connected vertex set of `graph` with `2..=max_size` vertices, each
/// once (rooted at its smallest vertex). `visit` receives the set and the
/// number of edges it induces. Returns the number of sets visited and
/// whether the budget cut the sweep short.
pub fn for_each_connected_vertex_set<F>(
    graph: &IndexedGraph,
    max_size: usize,
    budget: u64,
    mut visit: F,
) -> (u64, bool)
where
    F: FnMut(&[Vertex], usize) -> ControlFlow<()>,
{
    const FREE: u8 = 0;
    const MEMBER: u8 = 1;
    const SEEN: u8 = 2;
    struct State<'g> {
        graph: &'g IndexedGraph,
        mark: Vec<u8>,
        members: Vec<Vertex>,
        floor: Vertex,
        max_size: usize,
        budget: u64,
        visited: u64,
        aborted: bool,
    }
    fn grow<F: FnMut(&[Vertex], usize) -> ControlFlow<()>>(
        st: &mut State<'_>,
        frontier: &[Vertex],
        induced: usize,
        visit: &mut F,
    ) -> ControlFlow<()> {
        for (idx, &w) in frontier.iter().enumerate() {
            if st.visited >= st.budget {
                st.aborted = true;
                return ControlFlow::Break(());
            }
            let gained = st.graph.adj(w).iter().filter(|&&(x, _)| st.mark[x as usize] == MEMBER).count();
            st.mark[w as usize] = MEMBER;
            st.members.push(w);
            let mut next: Vec<Vertex> = frontier[idx + 1..].to_vec();
            let added_from = next.len();
            for &(x, _) in st.graph.adj(w) {
                if st.mark[x as usize] == FREE && x >= st.floor {
                    st.mark[x as usize] = SEEN;
                    next.push(x);
                }
            }
            st.visited += 1;
            let mut flow = visit(&st.members, induced + gained);
            if flow.is_continue() && st.members.len() < st.max_size {
                flow = grow(st, &next, induced + gained, visit);
            }
            for &x in &next[added_from..] {
                st.mark[x as usize] = FREE;
            }
            st.members.pop();
            st.mark[w as usize] = SEEN;
            flow?;
        }
        for &w in frontier {
            st.mark[w as usize] = SEEN;
        }
        ControlFlow::Continue(())
    }
    let mut st = State {
        graph,
        mark: vec![FREE; graph.n()],
        members: Vec::with_capacity(max_size),
        floor: 0,
        max_size,
        budget,
        visited: 0,
        aborted: false,
    };
    if max_size < 2 {
        return (0, false);
    }
    for root in 0..graph.n() as Vertex {
        st.mark.iter_mut().for_each(|m| *m = FREE);
        st.floor = root;
        st.mark[root as usize] = MEMBER;
        st.members.clear();
        st.members.push(root);
        let mut frontier = Vec::new();
        for &(x, _) in graph.adj(root) {
            if x > root && st.mark[x as usize] == FREE {
                st.mark[x as usize] = SEEN;
                frontier.push(x);
            }
        }
        if grow(&mut st, &frontier, 0, &mut visit).is_break() {
            break;
        }
    }
    (st.visited, st.aborted)
}

/// `counts[v][i]` is the number of connected `i`-edge subgraphs containing
/// `v`, for `i <= max_edges`. Each subgraph is generated once and credited
/// to all of its vertices.
pub fn rooted_subgraph_counts(graph: &IndexedGraph, max_edges: usize, budget: u64) -> (Vec<Vec<u64>>, EnumerationStats) {
    struct Credit {
        verts: Vec<Vertex>,
        counts: Vec<Vec<u64>>,
    }
    impl Visitor for Credit {
        fn enter(&mut self, set: &EdgeSet, _edge: usize, fresh: Option<Vertex>, _n: usize) -> ControlFlow<()> {
            if let Some(w) = fresh {
                self.verts.push(w);
            }
            let i = set.len();
            for &v in &self.verts {
                self.counts[v as usize][i] += 1;
            }
            ControlFlow::Continue(())
        }

        fn leave(&mut self, _edge: usize, fresh: Option<Vertex>) {
            if fresh.is_some() {
                self.verts.pop();
            }
        }
    }
    let mut credit = Credit { verts: Vec::new(), counts: vec![vec![0; max_edges + 1]; graph.n()] };
    let mut total = EnumerationStats { counts: vec![0; max_edges + 1], ..Default::default() };
    for root in 0..graph.n() as Vertex {
        credit.verts.clear();
        credit.verts.push(root);
        let remaining = budget.saturating_sub(total.visited);
        let stats = Enumerator::new(graph, max_edges, remaining).with_floor(root).run(root, &mut credit);
        total.visited += stats.visited;
        for (acc, c) in total.counts.iter_mut().zip(&stats.counts) {
            *acc += c;
        }
        if stats.aborted {
            total.aborted = true;
            break;
        }
    }
    (credit.counts, total)
}

// e to 40 digits, truncated
const E_DIGITS: &str = "2718281828459045235360287471352662497757";

/// `count < (e * delta)^i` in integer arithmetic, `e` truncated to 40 digits.
pub fn below_growth_bound(count: u64, delta: usize, i: usize) -> bool {
    let scale = BigUint::from(10u32).pow(39);
    let lo: BigUint = E_DIGITS.parse().expect("digits");
    let lhs = BigUint::from(count) * scale.pow(i as u32);
    let d = BigUint::from(delta);
    // the truncation is below e, so a pass here is a pass for e itself
    lhs < (lo * &d).pow(i as u32)
}

/// Histogram rows `(i, v, c, c_S, g, r, t) -> count` over all connected
/// fragments with at most `max_edges` edges.
pub fn parameter_histogram(
    t: &Triangulation,
    max_edges: usize,
    budget: u64,
) -> Result<(BTreeMap<[usize; 7], u64>, EnumerationStats)> {
    let ctx = FragmentContext::new(t)?;
    let mut hist = BTreeMap::new();
    let mut tally = |set: &EdgeSet, _: usize| {
        let f = ctx.params(set);
        *hist.entry([f.i, f.v, f.c, f.c_s, f.g, f.r, f.t]).or_insert(0) += 1;
        ControlFlow::Continue(())
    };
    let stats = for_each_connected(ctx.graph(), max_edges, budget, &mut tally);
    Ok((hist, stats))
}

pub fn histogram_csv(hist: &BTreeMap<[usize; 7], u64>) -> String {
    let mut out = String::from("i,v,c,c_s,g,r,t,count\n");
    for (key, count) in hist {
        let cells: Vec<String> = key.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(","));
        out.push_str(&format!(",{count}\n"));
    }
    out
}

/// Exact count of subgraphs of `J` by `(i, c, t)` together with the
/// counting ceiling `(2048e)^i * C(2j, c) * ell^t`, reported as its
/// natural logarithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgraphCount {
    pub i: usize,
    pub c: usize,
    pub t: usize,
    pub count: u64,
    pub ln_bound: f64,
}

/// Counts all edge subsets `I` of `j_edges` (connected or not) with
/// `|I| = i` by `(c, t)`. Feasible for `|J|` up to about 30 at small `i`.
pub fn count_bound_check_subgraphs(
    t: &Triangulation,
    j_edges: &[(Vertex, Vertex)],
    i: usize,
    ell: usize,
    budget: u64,
) -> Result<Vec<SubgraphCount>> {
    if i == 0 {
        return Err(parameter("subgraph counts start at i = 1"));
    }
    let ctx = FragmentContext::new(t)?;
    let ids: Vec<usize> = ctx.edge_set(j_edges)?.iter().collect();
    let j = ids.len();
    if i > j {
        return Ok(Vec::new());
    }
    let mut tallies: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut visited = 0u64;
    let mut chosen = Vec::with_capacity(i);
    fn rec(
        ctx: &FragmentContext,
        ids: &[usize],
        start: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        tallies: &mut BTreeMap<(usize, usize), u64>,
        visited: &mut u64,
        budget: u64,
    ) -> bool {
        if left == 0 {
            *visited += 1;
            let f = ctx.params(&chosen.iter().copied().collect());
            *tallies.entry((f.c, f.t)).or_default() += 1;
            return *visited < budget;
        }
        for x in start..=ids.len() - left {
            chosen.push(ids[x]);
            let go = rec(ctx, ids, x + 1, left - 1, chosen, tallies, visited, budget);
            chosen.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if !rec(&ctx, &ids, 0, i, &mut chosen, &mut tallies, &mut visited, budget) {
        return Err(Error::Budget(format!("more than {budget} subsets of size {i}")));
    }
    let ln_binom = |a: usize, b: usize| -> f64 {
        (0..b).map(|x| ((a - x) as f64).ln() - ((x + 1) as f64).ln()).sum()
    };
    let ln_base = (2048.0 * std::f64::consts::E).ln();
    Ok(tallies
        .into_iter()
        .map(|((c, tt), count)| SubgraphCount {
            i,
            c,
            t: tt,
            count,
            ln_bound: i as f64 * ln_base + ln_binom(2 * j, c) + tt as f64 * (ell as f64).ln(),
        })
        .collect())
}
