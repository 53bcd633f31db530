//! Explicit (n,k)-triangulations and the shared polygon procedures.

mod k4;
mod nested;
mod two_ring;
mod wheel;

pub use k4::{construct_k4_sprinkle, k4_layout, K4Layout};
pub use nested::{construct_nested, nested_layout, NestedLayout};
pub use two_ring::{construct_two_ring, two_ring_layout, TwoRingLayout};
pub use wheel::{construct_wheel_chain, wheel_layout, wheel_length, WheelLayout};

use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};
use crate::graph::{Regime, Triangulation, Vertex};

/// Regime parameters derived from `(n, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub alpha: f64,
    /// `n = c*k + r`
    pub c: usize,
    pub r: usize,
    /// Wheel rim length, when the wheel-chain is feasible.
    pub ell: Option<usize>,
    /// `floor((k-2)/s)`, when `s >= 1`.
    pub b_t: Option<usize>,
}

impl ConstructionParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_nk(n, k)?;
        let s = n - k;
        Ok(ConstructionParams {
            n,
            k,
            s,
            alpha: k as f64 / n as f64,
            c: n / k,
            r: n % k,
            ell: wheel_length(n, k).ok(),
            b_t: (s >= 1).then(|| (k - 2) / s),
        })
    }
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 3 || k > n {
        return Err(parameter(format!("need 3 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Chooses `a` of the `b` edges of a cycle so that every arc carries at most
/// `len*a/b + 1` chosen edges. Edge `j` joins cycle positions `j` and `j+1 mod b`.
pub fn even_edge_select(a: usize, b: usize) -> Result<Vec<usize>> {
    if a >= b {
        return Err(parameter(format!("even_edge_select needs a < b, got a={a}, b={b}")));
    }
    Ok((1..=a).map(|i| i * b / a - 1).collect())
}

/// First arc of the `b`-cycle violating the even-distribution bound, as
/// `(start edge, arc length, chosen edges on it)`. Arcs of every length
/// `1..b` from every start are scanned.
pub fn arc_bound_violation(a: usize, b: usize, chosen: &[usize]) -> Option<(usize, usize, usize)> {
    let mut mark = vec![0usize; b];
    for &e in chosen {
        mark[e] = 1;
    }
    for start in 0..b {
        let mut cnt = 0;
        for len in 1..b {
            cnt += mark[(start + len - 1) % b];
            if cnt * b > len * a + b {
                return Some((start, len, cnt));
            }
        }
    }
    None
}

/// Comb order of a polygon: `c[p-1], c[0], c[p-2], c[1], ...`.
fn zigzag(cycle: &[Vertex]) -> Vec<Vertex> {
    let p = cycle.len();
    (0..p)
        .map(|j| if j % 2 == 0 { cycle[p - 1 - j / 2] } else { cycle[j / 2] })
        .collect()
}

/// Chords of the comb triangulation (the square of a Hamilton path) of a
/// polygon given in cyclic order. The comb runs from the edge
/// `cycle[p-1] cycle[0]` to the edge `cycle[m-1] cycle[m]` with `m = p/2`.
pub fn comb_triangulate(cycle: &[Vertex]) -> Result<Vec<(Vertex, Vertex)>> {
    if cycle.len() < 3 {
        return Err(parameter(format!("polygon of length {} cannot be triangulated", cycle.len())));
    }
    let z = zigzag(cycle);
    Ok((1..cycle.len() - 2).map(|j| (z[j], z[j + 1])).collect())
}

/// Triangles of the comb triangulation, in left-to-right comb order.
pub fn comb_faces(cycle: &[Vertex]) -> Result<Vec<[Vertex; 3]>> {
    if cycle.len() < 3 {
        return Err(parameter(format!("polygon of length {} cannot be triangulated", cycle.len())));
    }
    let z = zigzag(cycle);
    Ok(z.windows(3).map(|w| [w[0], w[1], w[2]]).collect())
}

/// Comb triangulation of a bare `n`-gon (the `s = 0` case).
pub fn construct_polygon(n: usize) -> Result<Triangulation> {
    check_nk(n, n)?;
    let boundary: Vec<Vertex> = (0..n as Vertex).collect();
    let tris = comb_faces(&boundary)?;
    Triangulation::from_triangles(n, boundary, &tris, Regime::Custom)
}

/// Picks the constructor for `(n, k)`.
pub fn select_regime(n: usize, k: usize) -> Result<Regime> {
    check_nk(n, k)?;
    let s = n - k;
    let root = (n as f64).sqrt().ceil() as usize;
    Ok(if s == 0 {
        Regime::Custom
    } else if n >= 2 * k {
        Regime::Nested
    } else if s <= root && 3 * s <= k - 2 {
        Regime::K4Sprinkle
    } else if wheel_length(n, k).is_ok() && 3 * s < n {
        Regime::WheelChain
    } else {
        Regime::TwoRing
    })
}

pub fn construct(n: usize, k: usize, regime: Regime) -> Result<Triangulation> {
    match regime {
        Regime::Nested => construct_nested(n, k),
        Regime::TwoRing => construct_two_ring(n, k),
        Regime::K4Sprinkle => construct_k4_sprinkle(n, k),
        Regime::WheelChain => construct_wheel_chain(n, k),
        Regime::Custom if n == k => construct_polygon(n),
        Regime::Custom => Err(parameter("custom triangulations are loaded, not constructed")),
    }
}

pub fn auto_construct(n: usize, k: usize) -> Result<Triangulation> {
    construct(n, k, select_regime(n, k)?)
}

/// Rebuilds `t`'s own constructor output and reports whether `t` equals it.
pub(crate) fn is_canonical(t: &Triangulation) -> bool {
    construct(t.n(), t.k(), t.regime()).map(|c| &c == t).unwrap_or(false)
}

pub(crate) fn regime_error(name: &str, n: usize, k: usize, need: &str) -> Error {
    parameter(format!("{name} construction needs {need}, got n={n}, k={k}"))
}
