//! All internal vertices on one inner cycle (`k < n < 2k`).

use super::{comb_faces, even_edge_select, regime_error};
use crate::error::Result;
use crate::graph::{Regime, Triangulation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRingLayout {
    /// Consecutive boundary groups; `hubs[i]` is joined to all of
    /// `groups[i]` and to the first vertex of `groups[i+1]`.
    pub groups: Vec<Vec<Vertex>>,
    /// The inner cycle, in cyclic order.
    pub hubs: Vec<Vertex>,
}

pub fn two_ring_layout(n: usize, k: usize) -> Result<TwoRingLayout> {
    if k < 3 || n <= k || n >= 2 * k {
        return Err(regime_error("two-ring", n, k, "k < n < 2k"));
    }
    let s = n - k;
    let separators = even_edge_select(s, k)?;
    let groups = (0..s)
        .map(|i| {
            let start = separators[i] + 1;
            let end = separators[(i + 1) % s] + 1;
            let len = (end + k - start - 1) % k + 1;
            (0..len).map(|d| ((start + d) % k) as Vertex).collect()
        })
        .collect();
    let hubs = (k..n).map(|v| v as Vertex).collect();
    Ok(TwoRingLayout { groups, hubs })
}

/// Two-ring construction. Boundary ids are `0..k`, inner cycle `k..n`.
pub fn construct_two_ring(n: usize, k: usize) -> Result<Triangulation> {
    let TwoRingLayout { groups, hubs } = two_ring_layout(n, k)?;
    let s = hubs.len();
    let mut tris = Vec::new();
    for i in 0..s {
        let u = hubs[i];
        let next_first = groups[(i + 1) % s][0];
        let fan: Vec<Vertex> = groups[i].iter().copied().chain([next_first]).collect();
        for w in fan.windows(2) {
            tris.push([u, w[0], w[1]]);
        }
        if s >= 2 {
            tris.push([u, hubs[(i + 1) % s], next_first]);
        }
    }
    if s >= 3 {
        tris.extend(comb_faces(&hubs)?);
    }
    let boundary: Vec<Vertex> = (0..k as Vertex).collect();
    Triangulation::from_triangles(n, boundary, &tris, Regime::TwoRing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    #[test]
    fn small_instance_sizes() {
        for (n, k, m) in [(11, 9, 21), (14, 10, 29), (5, 4, 8)] {
            let t = construct_two_ring(n, k).unwrap();
            assert!(validate(&t).unwrap().passed, "({n},{k})");
            assert_eq!(t.edge_count(), m);
            let s = n - k;
            assert!(t.max_degree() <= 5 + k.div_ceil(s));
        }
    }

    #[test]
    fn wheel_case_has_a_single_hub() {
        let t = construct_two_ring(5, 4).unwrap();
        assert_eq!(t.degree(4), 4);
    }

    #[test]
    fn groups_partition_the_boundary() {
        for k in 3..30 {
            for n in k + 1..2 * k {
                let layout = two_ring_layout(n, k).unwrap();
                let mut all: Vec<Vertex> = layout.groups.concat();
                all.sort_unstable();
                assert_eq!(all, (0..k as Vertex).collect::<Vec<_>>());
            }
        }
    }
}
