//! Labeled plane triangulations stored as rotation systems.
//!
//! A [`Triangulation`] keeps, for every vertex, the counter-clockwise cyclic
//! order of its neighbours. Faces are recovered by tracing darts: the face to
//! the left of the dart `u -> v` continues with `v -> w`, where `w` precedes
//! `u` in the rotation at `v`. With constructor outputs the boundary is listed
//! counter-clockwise, so inner faces come out counter-clockwise and the outer
//! face is traced clockwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{parameter, structural, Error, Result};

pub type Vertex = u32;

/// Which constructor produced a triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Nested,
    TwoRing,
    K4Sprinkle,
    WheelChain,
    Custom,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Nested => "nested",
            Regime::TwoRing => "two-ring",
            Regime::K4Sprinkle => "k4-sprinkle",
            Regime::WheelChain => "wheel-chain",
            Regime::Custom => "custom",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nested" => Ok(Regime::Nested),
            "two-ring" => Ok(Regime::TwoRing),
            "k4-sprinkle" | "k4" => Ok(Regime::K4Sprinkle),
            "wheel-chain" | "wheel" => Ok(Regime::WheelChain),
            "custom" => Ok(Regime::Custom),
            other => Err(parameter(format!("unknown regime '{other}'"))),
        }
    }
}

/// Edge count of every (n,k)-triangulation.
pub fn edge_count(n: usize, k: usize) -> usize {
    (3 * n).saturating_sub(3 + k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    k: usize,
    rotations: Vec<Vec<Vertex>>,
    boundary: Vec<Vertex>,
    internal: Vec<Vertex>,
    regime: Regime,
}

impl Triangulation {
    /// Wraps a rotation system after structural checks (ids in range and
    /// symmetric adjacency). Invariants are left to [`validate`].
    pub fn new(
        n: usize,
        k: usize,
        rotations: Vec<Vec<Vertex>>,
        boundary: Vec<Vertex>,
        internal: Vec<Vertex>,
        regime: Regime,
    ) -> Result<Self> {
        if n == 0 {
            return Err(structural("empty vertex set"));
        }
        if rotations.len() != n {
            return Err(structural(format!(
                "expected {n} rotation lists, found {}",
                rotations.len()
            )));
        }
        let in_range = |v: Vertex| (v as usize) < n;
        for (u, rot) in rotations.iter().enumerate() {
            if let Some(&bad) = rot.iter().find(|&&v| !in_range(v)) {
                return Err(structural(format!("vertex {u} lists dangling neighbour {bad}")));
            }
        }
        if let Some(&bad) = boundary.iter().chain(internal.iter()).find(|&&v| !in_range(v)) {
            return Err(structural(format!("dangling vertex id {bad}")));
        }
        let mut darts: HashMap<(Vertex, Vertex), i64> = HashMap::new();
        for (u, rot) in rotations.iter().enumerate() {
            for &v in rot {
                *darts.entry((u as Vertex, v)).or_default() += 1;
            }
        }
        for (&(u, v), &count) in &darts {
            if darts.get(&(v, u)).copied().unwrap_or(0) != count {
                return Err(structural(format!("asymmetric adjacency between {u} and {v}")));
            }
        }
        Ok(Triangulation { n, k, rotations, boundary, internal, regime })
    }

    /// Builds the rotation system of a disk from its inner triangles.
    ///
    /// Triangles may be given in any orientation; they are oriented
    /// consistently starting from the face on the boundary edge
    /// `boundary[0] -> boundary[1]`, which makes `boundary` the
    /// counter-clockwise outer cycle.
    pub(crate) fn from_triangles(
        n: usize,
        boundary: Vec<Vertex>,
        triangles: &[[Vertex; 3]],
        regime: Regime,
    ) -> Result<Self> {
        let k = boundary.len();
        let oriented = orient_triangles(&boundary, triangles)?;
        // successor in the counter-clockwise rotation at each corner
        let mut succ: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); n];
        for &[a, b, c] in &oriented {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                if succ[x as usize].insert(y, z).is_some() {
                    return Err(Error::Construction(format!(
                        "corner at {x} after {y} claimed by two triangles"
                    )));
                }
            }
        }
        let mut rotations = Vec::with_capacity(n);
        for (v, map) in succ.iter().enumerate() {
            let targets: BTreeSet<Vertex> = map.values().copied().collect();
            let nbrs: BTreeSet<Vertex> = map.keys().copied().chain(targets.iter().copied()).collect();
            let start = nbrs
                .iter()
                .copied()
                .find(|u| !targets.contains(u))
                .or_else(|| nbrs.iter().next().copied());
            let mut rot = Vec::with_capacity(nbrs.len());
            if let Some(mut cur) = start {
                loop {
                    rot.push(cur);
                    match map.get(&cur) {
                        Some(&next) if next != start.unwrap() => cur = next,
                        _ => break,
                    }
                    if rot.len() > nbrs.len() {
                        return Err(Error::Construction(format!("rotation at {v} does not close")));
                    }
                }
            }
            if rot.len() != nbrs.len() {
                return Err(Error::Construction(format!(
                    "vertex {v} is not a disk point ({} of {} neighbours chained)",
                    rot.len(),
                    nbrs.len()
                )));
            }
            rotations.push(rot);
        }
        let on_boundary: BTreeSet<Vertex> = boundary.iter().copied().collect();
        let internal = (0..n as Vertex).filter(|v| !on_boundary.contains(v)).collect();
        Triangulation::new(n, k, rotations, boundary, internal, regime)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of internal vertices, `n - k`.
    pub fn s(&self) -> usize {
        self.n - self.k
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotations
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotations[v as usize]
    }

    pub fn boundary(&self) -> &[Vertex] {
        &self.boundary
    }

    pub fn internal(&self) -> &[Vertex] {
        &self.internal
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotations[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rotations.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_sum(&self) -> usize {
        self.rotations.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rotations[u as usize].contains(&v)
    }

    /// Distinct undirected edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let set: BTreeSet<(Vertex, Vertex)> = self
            .rotations
            .iter()
            .enumerate()
            .flat_map(|(u, rot)| rot.iter().map(move |&v| (u as Vertex, v)))
            .filter(|&(u, v)| u < v)
            .collect();
        set.into_iter().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_internal(&self, v: Vertex) -> bool {
        self.internal.contains(&v)
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            n: self.n,
            k: self.k,
            boundary: self.boundary.clone(),
            rotations: self
                .rotations
                .iter()
                .enumerate()
                .map(|(v, rot)| (v as Vertex, rot.clone()))
                .collect(),
            internal: self.internal.clone(),
            regime_tag: self.regime,
        }
    }

    pub fn from_file(file: TriangulationFile) -> Result<Self> {
        let TriangulationFile { n, k, boundary, rotations, internal, regime_tag } = file;
        let mut rots = vec![Vec::new(); n];
        for (v, rot) in rotations {
            let slot = rots
                .get_mut(v as usize)
                .ok_or_else(|| structural(format!("rotation given for dangling id {v}")))?;
            *slot = rot;
        }
        Triangulation::new(n, k, rots, boundary, internal, regime_tag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("triangulation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TriangulationFile = serde_json::from_str(text)?;
        Triangulation::from_file(file)
    }

    /// Graphviz rendering; boundary edges are drawn bold blue and internal
    /// vertices filled red.
    pub fn to_dot(&self) -> String {
        let k = self.boundary.len();
        let boundary_edges: BTreeSet<(Vertex, Vertex)> = (0..k)
            .map(|i| {
                let (a, b) = (self.boundary[i], self.boundary[(i + 1) % k]);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "graph T_{}_{} {{", self.n, self.k);
        let _ = writeln!(out, "  node [shape=circle];");
        for &v in &self.internal {
            let _ = writeln!(out, "  {v} [style=filled, fillcolor=red];");
        }
        for (u, v) in self.edges() {
            if boundary_edges.contains(&(u, v)) {
                let _ = writeln!(out, "  {u} -- {v} [color=blue, penwidth=2];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk JSON layout.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangulationFile {
    pub n: usize,
    pub k: usize,
    pub boundary: Vec<Vertex>,
    pub rotations: BTreeMap<Vertex, Vec<Vertex>>,
    pub internal: Vec<Vertex>,
    pub regime_tag: Regime,
}

fn orient_triangles(boundary: &[Vertex], triangles: &[[Vertex; 3]]) -> Result<Vec<[Vertex; 3]>> {
    let key = |a: Vertex, b: Vertex| (a.min(b), a.max(b));
    let mut by_edge: HashMap<(Vertex, Vertex), Vec<usize>> = HashMap::new();
    for (f, t) in triangles.iter().enumerate() {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(Error::Construction(format!("degenerate triangle {t:?}")));
        }
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            by_edge.entry(key(a, b)).or_default().push(f);
        }
    }
    if let Some((e, fs)) = by_edge.iter().find(|(_, fs)| fs.len() > 2) {
        return Err(Error::Construction(format!("edge {e:?} lies on {} triangles", fs.len())));
    }
    if boundary.len() < 2 {
        return Err(Error::Construction("boundary too short".into()));
    }
    let has_dart = |t: &[Vertex; 3], a: Vertex, b: Vertex| {
        (0..3).any(|i| t[i] == a && t[(i + 1) % 3] == b)
    };
    let flip = |t: [Vertex; 3]| [t[0], t[2], t[1]];

    let (b0, b1) = (boundary[0], boundary[1]);
    let seed = *by_edge
        .get(&key(b0, b1))
        .and_then(|fs| fs.first())
        .ok_or_else(|| Error::Construction("no triangle on the first boundary edge".into()))?;
    let mut oriented: Vec<Option<[Vertex; 3]>> = vec![None; triangles.len()];
    let first = triangles[seed];
    oriented[seed] = Some(if has_dart(&first, b0, b1) { first } else { flip(first) });
    let mut queue = std::collections::VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        let t = oriented[f].unwrap();
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            for &g in &by_edge[&key(a, b)] {
                if g == f {
                    continue;
                }
                let raw = triangles[g];
                let want = if has_dart(&raw, b, a) { raw } else { flip(raw) };
                match oriented[g] {
                    None => {
                        oriented[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(existing) if existing != want => {
                        return Err(Error::Construction(format!(
                            "triangles {f} and {g} cannot be oriented consistently"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    oriented
        .into_iter()
        .enumerate()
        .map(|(f, t)| t.ok_or_else(|| Error::Construction(format!("triangle {f} is disconnected"))))
        .collect()
}

/// Dart/face structure of a simple rotation system.
#[derive(Clone, Debug)]
pub struct Embedding {
    offsets: Vec<usize>,
    heads: Vec<Vertex>,
    tails: Vec<Vertex>,
    twin: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    outer: Option<usize>,
}

impl Embedding {
    pub fn new(t: &Triangulation) -> Result<Self> {
        if let Some(msg) = simplicity_violation(t) {
            return Err(structural(format!("rotation system is not simple: {msg}")));
        }
        let mut offsets = Vec::with_capacity(t.n + 1);
        let mut heads = Vec::new();
        let mut tails = Vec::new();
        offsets.push(0);
        for (u, rot) in t.rotations.iter().enumerate() {
            for &v in rot {
                tails.push(u as Vertex);
                heads.push(v);
            }
            offsets.push(heads.len());
        }
        let mut index: HashMap<(Vertex, Vertex), usize> = HashMap::with_capacity(heads.len());
        for d in 0..heads.len() {
            index.insert((tails[d], heads[d]), d);
        }
        let twin: Vec<usize> = (0..heads.len()).map(|d| index[&(heads[d], tails[d])]).collect();

        let mut face_of = vec![usize::MAX; heads.len()];
        let mut faces = Vec::new();
        for start in 0..heads.len() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                if face_of[d] != usize::MAX {
                    return Err(structural("rotation system does not close into faces"));
                }
                face_of[d] = id;
                darts.push(d);
                // at the head v, step to the predecessor of the tail u
                let back = twin[d];
                let v = heads[d] as usize;
                let pos = back - offsets[v];
                let deg = offsets[v + 1] - offsets[v];
                d = offsets[v] + (pos + deg - 1) % deg;
                if d == start {
                    break;
                }
            }
            faces.push(darts);
        }

        let boundary_set: BTreeSet<Vertex> = t.boundary.iter().copied().collect();
        let matching: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, darts)| {
                darts.len() == t.boundary.len()
                    && darts.iter().map(|&d| tails[d]).collect::<BTreeSet<_>>() == boundary_set
            })
            .map(|(i, _)| i)
            .collect();
        let outer = match matching.len() {
            0 => None,
            1 => Some(matching[0]),
            _ => {
                // only the bare triangle has two candidates; take the one
                // traversing the boundary against its listed order
                let mut reversed: Vec<Vertex> = t.boundary.clone();
                reversed.reverse();
                matching.into_iter().find(|&f| {
                    let cyc: Vec<Vertex> = faces[f].iter().map(|&d| tails[d]).collect();
                    is_rotation_of(&cyc, &reversed)
                })
            }
        };
        Ok(Embedding { offsets, heads, tails, twin, face_of, faces, outer })
    }

    pub fn dart_count(&self) -> usize {
        self.heads.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer
    }

    pub fn face_of(&self, dart: usize) -> usize {
        self.face_of[dart]
    }

    pub fn twin(&self, dart: usize) -> usize {
        self.twin[dart]
    }

    pub fn tail(&self, dart: usize) -> Vertex {
        self.tails[dart]
    }

    pub fn head(&self, dart: usize) -> Vertex {
        self.heads[dart]
    }

    /// Dart `u -> v`, if the edge exists.
    pub fn dart(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let (lo, hi) = (self.offsets[u as usize], self.offsets[u as usize + 1]);
        (lo..hi).find(|&d| self.heads[d] == v)
    }

    pub fn face_darts(&self, face: usize) -> &[usize] {
        &self.faces[face]
    }

    pub fn face_vertices(&self, face: usize) -> Vec<Vertex> {
        self.faces[face].iter().map(|&d| self.tails[d]).collect()
    }
}

fn is_rotation_of(a: &[Vertex], b: &[Vertex]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

fn simplicity_violation(t: &Triangulation) -> Option<String> {
    for (u, rot) in t.rotations.iter().enumerate() {
        if rot.contains(&(u as Vertex)) {
            return Some(format!("loop at {u}"));
        }
        let distinct: BTreeSet<Vertex> = rot.iter().copied().collect();
        if distinct.len() != rot.len() {
            return Some(format!("parallel edges at {u}"));
        }
    }
    None
}

/// Faces of `t` as cyclic vertex sequences, outer face included.
pub fn faces(t: &Triangulation) -> Result<Vec<Vec<Vertex>>> {
    let emb = Embedding::new(t)?;
    Ok((0..emb.face_count()).map(|f| emb.face_vertices(f)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks every (n,k)-triangulation invariant by tracing faces.
///
/// Returns `Err` only for input that is not a rotation system at all;
/// invariant failures are reported in the [`ValidationReport`].
pub fn validate(t: &Triangulation) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, witness: String| {
        checks.push(Check { name: name.to_string(), passed, witness });
    };
    let (n, k) = (t.n, t.k);

    let simple = simplicity_violation(t);
    push("simple", simple.is_none(), simple.clone().unwrap_or_default());

    let comps = components(t);
    push(
        "connected",
        comps == 1,
        if comps == 1 { String::new() } else { format!("{comps} components") },
    );

    let m = t.edge_count();
    let expected = edge_count(n, k);
    push(
        "edge-count",
        k >= 3 && k <= n && m == expected,
        format!("m = {m}, 3n-3-k = {expected}"),
    );

    let boundary_witness = boundary_cycle_violation(t);
    push("boundary-cycle", boundary_witness.is_none(), boundary_witness.unwrap_or_default());

    let on_boundary: BTreeSet<Vertex> = t.boundary.iter().copied().collect();
    let internal: BTreeSet<Vertex> = t.internal.iter().copied().collect();
    let complement: BTreeSet<Vertex> = (0..n as Vertex).filter(|v| !on_boundary.contains(v)).collect();
    let internal_ok = internal.len() == t.internal.len() && internal == complement && internal.len() + k == n;
    push(
        "internal-set",
        internal_ok,
        if internal_ok {
            String::new()
        } else {
            format!("internal {:?} vs complement of boundary {:?}", t.internal, complement)
        },
    );

    if simple.is_some() {
        for name in ["outer-face", "triangular-faces", "euler"] {
            push(name, false, "skipped: rotation system is not simple".into());
        }
    } else {
        let emb = Embedding::new(t)?;
        let f = emb.face_count();
        match emb.outer_face() {
            Some(_) => push("outer-face", true, String::new()),
            None => push("outer-face", false, "no face traces the boundary cycle".into()),
        }
        let bad: Vec<Vec<Vertex>> = (0..f)
            .filter(|&fi| Some(fi) != emb.outer_face())
            .map(|fi| emb.face_vertices(fi))
            .filter(|cyc| cyc.len() != 3 || cyc.iter().collect::<BTreeSet<_>>().len() != 3)
            .collect();
        push(
            "triangular-faces",
            bad.is_empty(),
            bad.first().map(|c| format!("non-triangular face {c:?}")).unwrap_or_default(),
        );
        let euler = n as i64 - m as i64 + f as i64;
        push("euler", euler == 2 && comps == 1, format!("v - e + f = {n} - {m} + {f} = {euler}"));
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidationReport { checks, passed })
}

fn components(t: &Triangulation) -> usize {
    let mut seen = vec![false; t.n];
    let mut count = 0;
    for s in 0..t.n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &t.rotations[u] {
                if !std::mem::replace(&mut seen[v as usize], true) {
                    stack.push(v as usize);
                }
            }
        }
    }
    count
}

fn boundary_cycle_violation(t: &Triangulation) -> Option<String> {
    let b = &t.boundary;
    if b.len() != t.k {
        return Some(format!("boundary lists {} vertices, k = {}", b.len(), t.k));
    }
    if b.len() < 3 {
        return Some("boundary shorter than 3".into());
    }
    if b.iter().collect::<BTreeSet<_>>().len() != b.len() {
        return Some("boundary repeats a vertex".into());
    }
    (0..b.len())
        .map(|i| (b[i], b[(i + 1) % b.len()]))
        .find(|&(u, v)| !t.has_edge(u, v))
        .map(|(u, v)| format!("boundary edge {u}-{v} missing"))
}

/// Adjacency lists carrying edge ids, indexed consistently with
/// [`Triangulation::edges`].
#[derive(Clone, Debug)]
pub struct IndexedGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<(Vertex, usize)>>,
}

impl IndexedGraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u as usize].push((v, id));
            adj[v as usize].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        IndexedGraph { n, edges, adj }
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        Self::new(t.n(), t.edges())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (Vertex, Vertex) {
        self.edges[id]
    }

    pub fn adj(&self, v: Vertex) -> &[(Vertex, usize)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.adj[u as usize].iter().find(|&&(w, _)| w == v).map(|&(_, id)| id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Triangulation {
        // boundary 0,1,2 counter-clockwise, centre 3
        Triangulation::from_triangles(4, vec![0, 1, 2], &[[0, 1, 3], [1, 2, 3], [2, 0, 3]], Regime::Custom)
            .unwrap()
    }

    #[test]
    fn k4_validates_with_four_triangular_faces() {
        let t = k4();
        let report = validate(&t).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(t.edge_count(), 6);
        let fs = faces(&t).unwrap();
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn wheel_has_four_triangles_and_outer_square() {
        let t = Triangulation::from_triangles(
            5,
            vec![0, 1, 2, 3],
            &[[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
            Regime::Custom,
        )
        .unwrap();
        let fs = faces(&t).unwrap();
        assert_eq!(fs.len(), 5);
        assert_eq!(fs.iter().filter(|f| f.len() == 3).count(), 4);
        assert_eq!(fs.iter().filter(|f| f.len() == 4).count(), 1);
        assert!(validate(&t).unwrap().passed);
    }

    #[test]
    fn deleting_an_edge_fails_count_and_triangularity() {
        let t = k4();
        let mut rots = t.rotations().to_vec();
        rots[0].retain(|&v| v != 3);
        rots[3].retain(|&v| v != 0);
        let broken = Triangulation::new(4, 3, rots, vec![0, 1, 2], vec![3], Regime::Custom).unwrap();
        let report = validate(&broken).unwrap();
        assert!(!report.passed);
        assert!(!report.check("edge-count").unwrap().passed);
        assert!(!report.check("triangular-faces").unwrap().passed);
    }

    #[test]
    fn asymmetric_adjacency_is_structural() {
        let rots = vec![vec![1, 2], vec![0, 2], vec![0]];
        let err = Triangulation::new(3, 3, rots, vec![0, 1, 2], vec![], Regime::Custom).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let rots = vec![vec![1, 7], vec![0], vec![]];
        assert!(matches!(
            Triangulation::new(3, 3, rots, vec![0, 1, 2], vec![], Regime::Custom),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn bare_triangle_identifies_outer_face() {
        let t = Triangulation::from_triangles(3, vec![0, 1, 2], &[[0, 1, 2]], Regime::Custom).unwrap();
        assert!(validate(&t).unwrap().passed);
    }

    #[test]
    fn json_roundtrip_and_dot() {
        let t = k4();
        let back = Triangulation::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let dot = t.to_dot();
        assert_eq!(dot.matches("color=blue").count(), 3);
        assert!(dot.contains("3 [style=filled"));
    }
}
