//! Comb-triangulated k-gon with `s` face centres (`1 <= s <= k-2`).

use super::{comb_faces, even_edge_select, regime_error};
use crate::error::Result;
use crate::graph::{Regime, Triangulation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K4Layout {
    /// `floor((k-2)/s)`
    pub b_t: usize,
    /// Indices of the chosen faces in comb order.
    pub chosen: Vec<usize>,
    /// `centres[i]` splits comb face `chosen[i]`.
    pub centres: Vec<Vertex>,
    /// Corners of each chosen face.
    pub corners: Vec<[Vertex; 3]>,
}

pub fn k4_layout(n: usize, k: usize) -> Result<K4Layout> {
    if k < 3 || n <= k || n - k > k - 2 {
        return Err(regime_error("k4-sprinkle", n, k, "1 <= n-k <= k-2"));
    }
    let s = n - k;
    let faces = k - 2;
    let chosen = if s == faces { (0..faces).collect() } else { even_edge_select(s, faces)? };
    let boundary: Vec<Vertex> = (0..k as Vertex).collect();
    let comb = comb_faces(&boundary)?;
    Ok(K4Layout {
        b_t: faces / s,
        corners: chosen.iter().map(|&f| comb[f]).collect(),
        centres: (k..n).map(|v| v as Vertex).collect(),
        chosen,
    })
}

/// K4-sprinkle construction. Boundary ids are `0..k`; centres `k..n` in comb
/// order of their faces.
pub fn construct_k4_sprinkle(n: usize, k: usize) -> Result<Triangulation> {
    let layout = k4_layout(n, k)?;
    let boundary: Vec<Vertex> = (0..k as Vertex).collect();
    let mut tris = Vec::new();
    let mut next = layout.chosen.iter().zip(&layout.centres).peekable();
    for (f, [a, b, c]) in comb_faces(&boundary)?.into_iter().enumerate() {
        match next.peek() {
            Some(&(&g, &x)) if g == f => {
                next.next();
                tris.extend([[a, b, x], [b, c, x], [c, a, x]]);
            }
            _ => tris.push([a, b, c]),
        }
    }
    Triangulation::from_triangles(n, boundary, &tris, Regime::K4Sprinkle)
}
