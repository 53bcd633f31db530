//! Simple cycles of a triangulation and the disks they bound.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{parameter, Result};
use crate::graph::{Embedding, Triangulation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleInfo {
    pub cycle: Vec<Vertex>,
    pub len: usize,
    /// Vertices of the bounded disk, cycle included.
    pub v_inside: usize,
    /// Vertices strictly inside.
    pub t_inside: usize,
}

/// Face-side queries for closed walks, reusing scratch space between calls.
pub struct Sides {
    emb: Embedding,
    n: usize,
    blocked: Vec<u32>,
    seen_face: Vec<u32>,
    seen_vertex: Vec<u32>,
    stamp: u32,
    queue: Vec<usize>,
}

/// Faces and vertices on the bounded side of a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub faces: Vec<usize>,
    pub vertices: Vec<Vertex>,
}

impl Sides {
    pub fn new(t: &Triangulation) -> Result<Self> {
        let emb = Embedding::new(t)?;
        if emb.outer_face().is_none() {
            return Err(parameter("no outer face: T does not validate"));
        }
        Ok(Sides {
            n: t.n(),
            blocked: vec![0; emb.dart_count()],
            seen_face: vec![0; emb.face_count()],
            seen_vertex: vec![0; t.n()],
            stamp: 0,
            queue: Vec::new(),
            emb,
        })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    /// The side of the simple cycle `cycle` that avoids the outer face.
    pub fn disk(&mut self, cycle: &[Vertex]) -> Disk {
        let outer = self.emb.outer_face().expect("checked in new");
        self.stamp += 1;
        let st = self.stamp;
        let len = cycle.len();
        let darts: Vec<usize> = (0..len)
            .map(|j| self.emb.dart(cycle[j], cycle[(j + 1) % len]).expect("cycle edge"))
            .collect();
        for &d in &darts {
            self.blocked[d] = st;
            self.blocked[self.emb.twin(d)] = st;
        }
        self.queue.clear();
        for &d in &darts {
            let f = self.emb.face_of(d);
            if self.seen_face[f] != st {
                self.seen_face[f] = st;
                self.queue.push(f);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let f = self.queue[head];
            head += 1;
            for &d in self.emb.face_darts(f) {
                if self.blocked[d] == st {
                    continue;
                }
                let g = self.emb.face_of(self.emb.twin(d));
                if self.seen_face[g] != st {
                    self.seen_face[g] = st;
                    self.queue.push(g);
                }
            }
        }
        let faces: Vec<usize> = if self.seen_face[outer] == st {
            (0..self.emb.face_count()).filter(|&f| self.seen_face[f] != st).collect()
        } else {
            self.queue.clone()
        };
        let mut vertices = Vec::new();
        for &f in &faces {
            for &d in self.emb.face_darts(f) {
                let v = self.emb.tail(d);
                if self.seen_vertex[v as usize] != st {
                    self.seen_vertex[v as usize] = st;
                    vertices.push(v);
                }
            }
        }
        vertices.sort_unstable();
        Disk { faces, vertices }
    }

    pub fn info(&mut self, cycle: &[Vertex]) -> CycleInfo {
        let disk = self.disk(cycle);
        CycleInfo {
            cycle: cycle.to_vec(),
            len: cycle.len(),
            v_inside: disk.vertices.len(),
            t_inside: disk.vertices.len() - cycle.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Statistics of a cycle sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStats {
    pub cycles: u64,
    pub aborted: bool,
}

/// Calls `visit` once per simple cycle of length `3..=max_len`. Each cycle
/// starts at its smallest vertex and is oriented so that its second vertex
/// is smaller than its last.
pub fn for_each_simple_cycle<F>(t: &Triangulation, max_len: usize, budget: u64, mut visit: F) -> CycleStats
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let adj: Vec<Vec<Vertex>> = (0..t.n() as Vertex)
        .map(|v| {
            let mut r = t.rotation(v).to_vec();
            r.sort_unstable();
            r
        })
        .collect();
    let mut stats = CycleStats::default();
    let mut on_path = vec![false; t.n()];
    let mut path = Vec::with_capacity(max_len);

    #[allow(clippy::too_many_arguments)]
    fn extend<F: FnMut(&[Vertex]) -> ControlFlow<()>>(
        adj: &[Vec<Vertex>],
        start: Vertex,
        max_len: usize,
        budget: u64,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        stats: &mut CycleStats,
        visit: &mut F,
    ) -> ControlFlow<()> {
        let last = *path.last().unwrap();
        for &x in &adj[last as usize] {
            if x == start && path.len() >= 3 && path[1] < last {
                if stats.cycles >= budget {
                    stats.aborted = true;
                    return ControlFlow::Break(());
                }
                stats.cycles += 1;
                visit(path)?;
            } else if x > start && !on_path[x as usize] && path.len() < max_len {
                on_path[x as usize] = true;
                path.push(x);
                let flow = extend(adj, start, max_len, budget, path, on_path, stats, visit);
                path.pop();
                on_path[x as usize] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    for s in 0..t.n() as Vertex {
        path.clear();
        path.push(s);
        on_path[s as usize] = true;
        let flow = extend(&adj, s, max_len, budget, &mut path, &mut on_path, &mut stats, &mut visit);
        on_path[s as usize] = false;
        if flow.is_break() {
            break;
        }
    }
    stats
}

/// All simple cycles up to `max_len` with their inside counts.
pub fn enumerate_simple_cycles(t: &Triangulation, max_len: usize, budget: u64) -> Result<(Vec<CycleInfo>, CycleStats)> {
    let mut sides = Sides::new(t)?;
    let mut out = Vec::new();
    let stats = for_each_simple_cycle(t, max_len, budget, |c| {
        out.push(sides.info(c));
        ControlFlow::Continue(())
    });
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct_nested, construct_two_ring};
    use crate::graph::faces;

    #[test]
    fn facial_triangles_have_nothing_inside() {
        let t = construct_nested(14, 7).unwrap();
        let mut sides = Sides::new(&t).unwrap();
        for f in faces(&t).unwrap().into_iter().filter(|f| f.len() == 3) {
            let info = sides.info(&f);
            assert_eq!((info.len, info.v_inside, info.t_inside), (3, 3, 0));
        }
    }

    #[test]
    fn wheel_rim_contains_the_hub() {
        let t = construct_two_ring(5, 4).unwrap();
        let mut sides = Sides::new(&t).unwrap();
        let info = sides.info(&[0, 1, 2, 3]);
        assert_eq!((info.len, info.v_inside, info.t_inside), (4, 5, 1));
        // either orientation gives the same disk
        assert_eq!(sides.info(&[3, 2, 1, 0]).v_inside, 5);
    }

    #[test]
    fn second_ring_of_nested() {
        let t = construct_nested(14, 7).unwrap();
        let ring: Vec<Vertex> = (7..14).collect();
        let info = Sides::new(&t).unwrap().info(&ring);
        assert_eq!((info.len, info.v_inside, info.t_inside), (7, 7, 0));
    }

    #[test]
    fn cycles_are_listed_once() {
        // K4: four triangles and three 4-cycles
        let t = crate::construct::auto_construct(4, 3).unwrap();
        let (cycles, stats) = enumerate_simple_cycles(&t, 4, u64::MAX).unwrap();
        assert_eq!(stats.cycles, 7);
        assert_eq!(cycles.iter().filter(|c| c.len == 3).count(), 4);
        let mut keys: Vec<Vec<Vertex>> = cycles.iter().map(|c| c.cycle.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 7);
    }
}
