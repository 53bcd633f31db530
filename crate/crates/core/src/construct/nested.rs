//! Concentric k-cycles joined by a triangular lattice (`n >= 2k`).

use super::{comb_faces, even_edge_select, regime_error};
use crate::error::Result;
use crate::graph::{Regime, Triangulation, Vertex};

/// Lattice coordinates of the canonical nested triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedLayout {
    pub c: usize,
    pub r: usize,
    /// Ring index per vertex, 0 being the boundary and `c-1` the innermost
    /// extended cycle (residual vertices included).
    pub ring: Vec<usize>,
    /// Angular coordinate `0..k`, `None` for residual vertices.
    pub angle: Vec<Option<usize>>,
    /// The innermost extended cycle in cyclic order.
    pub inner_cycle: Vec<Vertex>,
}

impl NestedLayout {
    pub fn is_residual(&self, v: Vertex) -> bool {
        self.angle[v as usize].is_none()
    }
}

pub fn nested_layout(n: usize, k: usize) -> Result<NestedLayout> {
    if k < 3 || n < 2 * k {
        return Err(regime_error("nested", n, k, "3 <= k and n >= 2k"));
    }
    let (c, r) = (n / k, n % k);
    let subdivided = even_edge_select(r, k)?;
    let mut ring = vec![0; n];
    let mut angle = vec![None; n];
    for i in 0..c - 1 {
        for j in 0..k {
            ring[i * k + j] = i;
            angle[i * k + j] = Some(j);
        }
    }
    let mut inner_cycle = Vec::with_capacity(k + r);
    let mut next = (c - 1) * k;
    let mut sub = subdivided.iter().peekable();
    for j in 0..k {
        ring[next] = c - 1;
        angle[next] = Some(j);
        inner_cycle.push(next as Vertex);
        next += 1;
        if sub.peek() == Some(&&j) {
            sub.next();
            ring[next] = c - 1;
            inner_cycle.push(next as Vertex);
            next += 1;
        }
    }
    debug_assert_eq!(next, n);
    Ok(NestedLayout { c, r, ring, angle, inner_cycle })
}

/// Nested construction. Ids are ring-major: ring `i < c-1` vertex `j` is
/// `i*k + j`; the innermost extended cycle follows in cyclic order starting
/// at its angle-0 vertex.
pub fn construct_nested(n: usize, k: usize) -> Result<Triangulation> {
    let layout = nested_layout(n, k)?;
    let c = layout.c;
    // position of each angle on the innermost cycle, and the residual after it
    let mut inner_at = vec![0 as Vertex; k];
    let mut residual_after: Vec<Option<Vertex>> = vec![None; k];
    for (pos, &v) in layout.inner_cycle.iter().enumerate() {
        match layout.angle[v as usize] {
            Some(j) => inner_at[j] = v,
            None => {
                let prev = layout.inner_cycle[pos - 1];
                residual_after[layout.angle[prev as usize].unwrap()] = Some(v);
            }
        }
    }
    let vid = |i: usize, j: usize| -> Vertex {
        let j = j % k;
        if i == c - 1 {
            inner_at[j]
        } else {
            (i * k + j) as Vertex
        }
    };

    let mut tris = Vec::new();
    for i in 0..c - 1 {
        for j in 0..k {
            tris.push([vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)]);
            match residual_after[j] {
                Some(x) if i + 1 == c - 1 => {
                    tris.push([vid(i, j), vid(i + 1, j + 1), x]);
                    tris.push([vid(i, j), x, vid(i + 1, j)]);
                }
                _ => tris.push([vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)]),
            }
        }
    }
    tris.extend(comb_faces(&layout.inner_cycle)?);
    let boundary: Vec<Vertex> = (0..k as Vertex).collect();
    Triangulation::from_triangles(n, boundary, &tris, Regime::Nested)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{faces, validate};

    #[test]
    fn fourteen_seven() {
        let t = construct_nested(14, 7).unwrap();
        assert!(validate(&t).unwrap().passed);
        assert_eq!(t.edge_count(), 32);
        assert!(t.max_degree() <= 7);
        // v - e + f = 2 with f counting the outer face
        assert_eq!(faces(&t).unwrap().len(), 20);
    }

    #[test]
    fn fourteen_four_has_two_residuals() {
        let layout = nested_layout(14, 4).unwrap();
        assert_eq!((layout.c, layout.r), (3, 2));
        assert_eq!(layout.inner_cycle.len(), 6);
        assert_eq!(layout.inner_cycle.iter().filter(|&&v| layout.is_residual(v)).count(), 2);
        let t = construct_nested(14, 4).unwrap();
        assert!(validate(&t).unwrap().passed);
        assert_eq!(t.edge_count(), 35);
    }

    #[test]
    fn six_three_is_the_octahedron() {
        let t = construct_nested(6, 3).unwrap();
        assert!(validate(&t).unwrap().passed);
        assert_eq!(t.edge_count(), 12);
        assert!((0..6).all(|v| t.degree(v) == 4));
    }

    #[test]
    fn rejects_small_n() {
        assert!(construct_nested(13, 7).is_err());
    }
}
