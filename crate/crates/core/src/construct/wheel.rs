//! Wheels alternating with comb blocks, glued along single edges.

use std::collections::{BTreeMap, HashMap};

use super::{check_nk, comb_faces};
use crate::error::{Error, Result};
use crate::graph::{Regime, Triangulation, Vertex};

/// Shortest rim the construction uses.
const MIN_RIM: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelLayout {
    pub ell: usize,
    pub hubs: Vec<Vertex>,
    /// `rims[i]` is the rim cycle around `hubs[i]`.
    pub rims: Vec<Vec<Vertex>>,
}

/// Rim length for `(n, k)`: the smallest `ell >= 5` with
/// `n - ell + 1 <= s + 2*ell*s <= n + ell`.
pub fn wheel_length(n: usize, k: usize) -> Result<usize> {
    check_nk(n, k)?;
    let s = n - k;
    if s == 0 {
        return Err(Error::Construction("wheel-chain needs at least one internal vertex".into()));
    }
    let lo = (k + 1).div_ceil(2 * s + 1);
    let hi = k / (2 * s - 1);
    let ell = lo.max(MIN_RIM);
    if ell > hi {
        let side = if lo > hi {
            format!("the two sides are incompatible: n-ell+1 <= s+2*ell*s needs ell >= {lo}, s+2*ell*s <= n+ell needs ell <= {hi}")
        } else {
            format!("s+2*ell*s <= n+ell needs ell <= {hi}, below the minimum rim length {MIN_RIM}")
        };
        return Err(Error::Construction(format!("no wheel rim length for n={n}, k={k}: {side}")));
    }
    Ok(ell)
}

pub fn construct_wheel_chain(n: usize, k: usize) -> Result<Triangulation> {
    build(n, k).map(|(t, _)| t)
}

pub fn wheel_layout(n: usize, k: usize) -> Result<WheelLayout> {
    build(n, k).map(|(_, layout)| layout)
}

/// Boundary ids `0..k` follow the outer cycle starting along the first rim;
/// hubs are `k..n` in chain order.
fn build(n: usize, k: usize) -> Result<(Triangulation, WheelLayout)> {
    let ell = wheel_length(n, k)?;
    let s = n - k;
    let a = ell / 2;
    let mut next: Vertex = 0;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let hubs: Vec<Vertex> = (0..s).map(|_| fresh()).collect();
    let rims: Vec<Vec<Vertex>> = (0..s).map(|_| (0..ell).map(|_| fresh()).collect()).collect();

    let mut tris = Vec::new();
    for (h, rim) in hubs.iter().zip(&rims) {
        for j in 0..ell {
            tris.push([*h, rim[j], rim[(j + 1) % ell]]);
        }
    }
    // block between consecutive wheels: left edge on rim i, right edge on rim i+1
    let p = ell + 4;
    let m = p / 2;
    for i in 0..s - 1 {
        let mut poly = vec![Vertex::MAX; p];
        poly[0] = rims[i][a];
        poly[p - 1] = rims[i][a + 1];
        poly[m - 1] = rims[i + 1][1];
        poly[m] = rims[i + 1][0];
        for slot in poly.iter_mut().filter(|v| **v == Vertex::MAX) {
            *slot = fresh();
        }
        tris.extend(comb_faces(&poly)?);
    }
    let b = n + ell + 2 - (2 * s * ell + s);
    debug_assert!((2..=2 * ell + 1).contains(&b));
    if b >= 3 {
        let last = &rims[s - 1];
        let mut poly = vec![last[a]];
        poly.extend((0..b - 2).map(|_| fresh()));
        poly.push(last[a + 1]);
        tris.extend(comb_faces(&poly)?);
    }
    if next as usize != n {
        return Err(Error::Construction(format!("wheel-chain used {next} vertices, expected {n}")));
    }

    let boundary = outer_cycle(&tris, rims[0][0], rims[0][1])?;
    if boundary.len() != k {
        return Err(Error::Construction(format!("outer cycle has length {}, expected {k}", boundary.len())));
    }
    let mut relabel = vec![Vertex::MAX; n];
    for (new, &old) in boundary.iter().enumerate() {
        relabel[old as usize] = new as Vertex;
    }
    for (i, &h) in hubs.iter().enumerate() {
        relabel[h as usize] = (k + i) as Vertex;
    }
    let tris: Vec<[Vertex; 3]> =
        tris.iter().map(|t| t.map(|v| relabel[v as usize])).collect();
    let t = Triangulation::from_triangles(n, (0..k as Vertex).collect(), &tris, Regime::WheelChain)?;
    let layout = WheelLayout {
        ell,
        hubs: hubs.iter().map(|&h| relabel[h as usize]).collect(),
        rims: rims.iter().map(|r| r.iter().map(|&v| relabel[v as usize]).collect()).collect(),
    };
    Ok((t, layout))
}

/// Walks the edges lying on exactly one triangle, starting with `first -> second`.
fn outer_cycle(tris: &[[Vertex; 3]], first: Vertex, second: Vertex) -> Result<Vec<Vertex>> {
    let mut count: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for t in tris {
        for (x, y) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            *count.entry((x.min(y), x.max(y))).or_default() += 1;
        }
    }
    let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (&(x, y), &c) in &count {
        if c == 1 {
            nbrs.entry(x).or_default().push(y);
            nbrs.entry(y).or_default().push(x);
        }
    }
    if nbrs.values().any(|v| v.len() != 2) {
        return Err(Error::Construction("outer boundary is not a simple cycle".into()));
    }
    let mut cycle = vec![first];
    let (mut prev, mut cur) = (first, second);
    while cur != first {
        cycle.push(cur);
        let ns = &nbrs[&cur];
        let step = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = cur;
        cur = step;
        if cycle.len() > nbrs.len() {
            return Err(Error::Construction("outer boundary does not close".into()));
        }
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    #[test]
    fn rim_lengths() {
        assert_eq!(wheel_length(20, 18).unwrap(), 5);
        assert_eq!(wheel_length(50, 46).unwrap(), 6);
        assert!(matches!(wheel_length(5, 4), Err(Error::Construction(_))));
    }

    #[test]
    fn twenty_eighteen() {
        let (t, layout) = build(20, 18).unwrap();
        assert!(validate(&t).unwrap().passed);
        assert_eq!(layout.ell, 5);
        for &h in &layout.hubs {
            assert_eq!(t.degree(h), 5);
        }
        assert!(t.boundary().iter().all(|&v| t.degree(v) <= 5));
        assert_eq!(t.max_degree(), 5);
    }

    #[test]
    fn toys_with_one_hub() {
        for (n, k) in [(7, 6), (8, 7), (9, 8)] {
            let t = construct_wheel_chain(n, k).unwrap();
            assert!(validate(&t).unwrap().passed, "({n},{k})");
            assert_eq!(t.degree(k as Vertex), 5);
        }
    }
}
