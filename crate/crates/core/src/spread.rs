//! Exact spread quantities of the hypergraph of all copies of a small
//! triangulation in `K_n`.
//!
//! Graphs on `[n]` are stored as bit masks over the `C(n,2)` pairs, so `n`
//! is capped at [`MAX_ORACLE_N`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};
use crate::fragments::FragmentContext;
use crate::graph::{Regime, Triangulation, Vertex};

pub const MAX_ORACLE_N: usize = 10;

/// Bit mask over the pairs of `[n]`.
pub type PairMask = u64;

pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pair_mask(n: usize, edges: &[(Vertex, Vertex)]) -> PairMask {
    edges.iter().fold(0, |m, &(a, b)| m | 1 << pair_index(n, a as usize, b as usize))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, x| acc * x)
}

/// Steps `p` to its lexicographic successor; false once `p` is the last.
fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Every permutation of `[n]`, sliced by its first entry.
fn for_each_permutation_with_head(n: usize, head: u8, mut visit: impl FnMut(&[u8])) {
    let mut p: Vec<u8> = std::iter::once(head).chain((0..n as u8).filter(|&x| x != head)).collect();
    loop {
        visit(&p);
        if !next_permutation(&mut p[1..]) {
            break;
        }
    }
}

/// All copies of `T` in `K_n`, with the automorphism group size.
#[derive(Clone, Debug)]
pub struct CopyOracle {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<u64>,
    mask: PairMask,
    copies: Vec<PairMask>,
    aut: u64,
    regime: Regime,
    internal: Vec<Vertex>,
    ctx: FragmentContext,
}

impl CopyOracle {
    pub fn new(t: &Triangulation) -> Result<Self> {
        let n = t.n();
        if n > MAX_ORACLE_N {
            return Err(Error::Budget(format!("spread oracle handles n <= {MAX_ORACLE_N}, got {n}")));
        }
        let edges = t.edges();
        let mut adj = vec![0u64; n];
        for &(a, b) in &edges {
            adj[a as usize] |= 1 << b;
            adj[b as usize] |= 1 << a;
        }
        let images: Vec<Vec<PairMask>> = (0..n as u8)
            .into_par_iter()
            .map(|head| {
                let mut out = Vec::new();
                for_each_permutation_with_head(n, head, |p| {
                    out.push(edges.iter().fold(0, |m, &(a, b)| {
                        m | 1 << pair_index(n, p[a as usize] as usize, p[b as usize] as usize)
                    }));
                });
                out
            })
            .collect();
        let mask = pair_mask(n, &edges);
        let mut copies: Vec<PairMask> = images.into_iter().flatten().collect();
        let total = copies.len() as u64;
        let aut = copies.iter().filter(|&&m| m == mask).count() as u64;
        copies.sort_unstable();
        copies.dedup();
        if aut * copies.len() as u64 != total {
            return Err(Error::Consistency(format!(
                "{} copies with {aut} automorphisms do not account for {total} permutations",
                copies.len()
            )));
        }
        let searched = automorphism_count(t)?;
        if searched != aut {
            return Err(Error::Consistency(format!("automorphism search found {searched}, relabelling scan {aut}")));
        }
        Ok(CopyOracle {
            n,
            edges,
            adj,
            mask,
            copies,
            aut,
            regime: t.regime(),
            internal: t.internal().to_vec(),
            ctx: FragmentContext::new(t)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// The triangulation's own edge set as a pair mask.
    pub fn mask(&self) -> PairMask {
        self.mask
    }

    pub fn copies(&self) -> &[PairMask] {
        &self.copies
    }

    /// `|Aut(T)|`, counted over all `n!` relabellings.
    pub fn automorphisms(&self) -> u64 {
        self.aut
    }

    pub fn copy_count(&self) -> u64 {
        self.copies.len() as u64
    }

    /// Copies containing `I`, by scanning the copy list.
    pub fn extensions_by_scan(&self, i: PairMask) -> u64 {
        self.copies.iter().filter(|&&c| c & i == i).count() as u64
    }

    /// Copies containing `I`, from the number of edge-preserving injections
    /// of `I` into `T`: each extends to `(n - v(I))!` relabellings, and
    /// `|Aut(T)|` relabellings give the same copy.
    pub fn extensions_by_embedding(&self, i: PairMask) -> Result<u64> {
        let n = self.n;
        let pairs = mask_pairs(n, i);
        if pairs.is_empty() {
            return Ok(self.copy_count());
        }
        // I's vertices in an order where each has an earlier neighbour when possible
        let mut nbrs = vec![0u64; n];
        for &(a, b) in &pairs {
            nbrs[a] |= 1 << b;
            nbrs[b] |= 1 << a;
        }
        let touched: u64 = nbrs.iter().enumerate().filter(|(_, &m)| m != 0).fold(0, |acc, (v, _)| acc | 1 << v);
        let mut order = Vec::new();
        let mut placed = 0u64;
        while placed != touched {
            let start = (touched & !placed).trailing_zeros() as usize;
            let mut queue = vec![start];
            placed |= 1 << start;
            while let Some(x) = queue.pop() {
                order.push(x);
                let mut fresh = nbrs[x] & !placed;
                placed |= fresh;
                while fresh != 0 {
                    let y = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    queue.push(y);
                }
            }
        }
        let mut image = vec![usize::MAX; n];
        let embeddings = self.embed(&order, 0, &nbrs, &mut image, 0);
        let v = order.len();
        let perms = BigUint::from(embeddings) * factorial(n - v);
        let (q, r) = (&perms / self.aut, &perms % self.aut);
        if !r.is_zero() {
            return Err(Error::Consistency(format!("{perms} relabellings not divisible by |Aut| = {}", self.aut)));
        }
        q.to_u64().ok_or_else(|| Error::Consistency("extension count overflow".into()))
    }

    fn embed(&self, order: &[usize], depth: usize, nbrs: &[u64], image: &mut [usize], used: u64) -> u64 {
        if depth == order.len() {
            return 1;
        }
        let x = order[depth];
        let need = nbrs[x].count_ones();
        let mut total = 0;
        for y in 0..self.n {
            if used >> y & 1 == 1 || self.adj[y].count_ones() < need {
                continue;
            }
            let ok = order[..depth]
                .iter()
                .filter(|&&w| nbrs[x] >> w & 1 == 1)
                .all(|&w| self.adj[y] >> image[w] & 1 == 1);
            if ok {
                image[x] = y;
                total += self.embed(order, depth + 1, nbrs, image, used | 1 << y);
            }
        }
        image[x] = usize::MAX;
        total
    }

    /// `|H ∩ <I>|`, computed both ways; a disagreement is an error.
    pub fn count_extensions(&self, i: PairMask) -> Result<u64> {
        let scan = self.extensions_by_scan(i);
        let embed = self.extensions_by_embedding(i)?;
        if scan != embed {
            return Err(Error::Consistency(format!(
                "extension counts disagree for {:?}: scan {scan}, embedding {embed}",
                mask_pairs(self.n, i)
            )));
        }
        Ok(scan)
    }

    /// Edge subsets of `T` (in its own labelling) with at most `max_edges`
    /// edges, the empty set first. Every subgraph of `K_n` lying in a copy
    /// is a relabelling of one of these.
    pub fn fragments(&self, max_edges: usize) -> Vec<PairMask> {
        let bits: Vec<PairMask> =
            self.edges.iter().map(|&(a, b)| 1 << pair_index(self.n, a as usize, b as usize)).collect();
        let mut out = vec![0];
        fn rec(bits: &[PairMask], start: usize, cur: PairMask, left: usize, out: &mut Vec<PairMask>) {
            if left == 0 {
                return;
            }
            for j in start..bits.len() {
                let next = cur | bits[j];
                out.push(next);
                rec(bits, j + 1, next, left - 1, out);
            }
        }
        rec(&bits, 0, 0, max_edges, &mut out);
        out
    }
}

pub fn mask_pairs(n: usize, mask: PairMask) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if mask >> pair_index(n, a, b) & 1 == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Vertices touched and edge-components of a graph given as pairs.
fn shape(pairs: &[(usize, usize)]) -> (usize, usize) {
    let mut verts: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut parent: BTreeMap<usize, usize> = verts.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    let mut comps = verts.len();
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra, rb);
            comps -= 1;
        }
    }
    (verts.len(), comps)
}

/// Automorphism count by backtracking: vertices are mapped in order, each
/// image must match degree and adjacency to the vertices already mapped.
pub fn automorphism_count(t: &Triangulation) -> Result<u64> {
    let n = t.n();
    if n > 16 {
        return Err(Error::Budget(format!("automorphism search handles n <= 16, got {n}")));
    }
    let adj: Vec<u32> = (0..n as Vertex).map(|v| t.rotation(v).iter().fold(0, |m, &x| m | 1 << x)).collect();
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    fn rec(adj: &[u32], deg: &[u32], x: usize, image: &mut Vec<usize>, used: u32) -> u64 {
        let n = adj.len();
        if x == n {
            return 1;
        }
        let mut total = 0;
        for y in 0..n {
            if used >> y & 1 == 1 || deg[y] != deg[x] {
                continue;
            }
            if (0..x).all(|w| (adj[x] >> w & 1) == (adj[y] >> image[w] & 1)) {
                image.push(y);
                total += rec(adj, deg, x + 1, image, used | 1 << y);
                image.pop();
            }
        }
        total
    }
    Ok(rec(&adj, &deg, 0, &mut Vec::with_capacity(n), 0))
}

/// A non-negative rational, parsed from `P/Q`, `P` or a decimal.
pub fn parse_rational(text: &str) -> Result<Ratio<u64>> {
    let text = text.trim();
    let bad = || parameter(format!("cannot read '{text}' as a non-negative rational"));
    if let Some((p, q)) = text.split_once('/') {
        let (p, q): (u64, u64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let scale = 10u64.checked_pow(digits).ok_or_else(bad)?;
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let frac: u64 = frac.parse().map_err(|_| bad())?;
        return Ok(Ratio::new(whole * scale + frac, scale));
    }
    Ok(Ratio::from_integer(text.parse().map_err(|_| bad())?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTally {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadViolation {
    pub check: String,
    pub edges: Vec<(usize, usize)>,
    pub count: u64,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub mode: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub automorphisms: u64,
    pub copies: u64,
    pub parameters: BTreeMap<String, String>,
    pub fragments: u64,
    pub checks: Vec<BoundTally>,
    /// Largest `(|H ∩ <I>| / |H|)^(1/|I|)` over the tested non-empty fragments.
    pub worst_ratio: f64,
    pub worst_fragment: Vec<(usize, usize)>,
    pub violations: Vec<SpreadViolation>,
    pub notes: Vec<String>,
    pub passed: bool,
}

const MAX_SPREAD_WITNESSES: usize = 32;

impl SpreadReport {
    fn new(mode: &str, oracle: &CopyOracle, t: &Triangulation, checks: &[&str]) -> Self {
        SpreadReport {
            mode: mode.into(),
            n: oracle.n,
            k: t.k(),
            m: oracle.m(),
            automorphisms: oracle.aut,
            copies: oracle.copy_count(),
            parameters: BTreeMap::new(),
            fragments: 0,
            checks: checks.iter().map(|c| BoundTally { name: c.to_string(), checked: 0, violations: 0 }).collect(),
            worst_ratio: 0.0,
            worst_fragment: Vec::new(),
            violations: Vec::new(),
            notes: Vec::new(),
            passed: false,
        }
    }

    fn record(&mut self, check: usize, ok: bool, n: usize, mask: PairMask, count: u64, bound: impl FnOnce() -> String) {
        let tally = &mut self.checks[check];
        tally.checked += 1;
        if !ok {
            tally.violations += 1;
            if self.violations.len() < MAX_SPREAD_WITNESSES {
                self.violations.push(SpreadViolation {
                    check: tally.name.clone(),
                    edges: mask_pairs(n, mask),
                    count,
                    bound: bound(),
                });
            }
        }
    }

    fn observe(&mut self, n: usize, mask: PairMask, count: u64) {
        let i = mask.count_ones();
        if i == 0 {
            return;
        }
        let ratio = (count as f64 / self.copies as f64).powf(1.0 / i as f64);
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.worst_fragment = mask_pairs(n, mask);
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.violations == 0);
        self
    }

    pub fn check(&self, name: &str) -> Option<&BoundTally> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn pow(x: u64, e: usize) -> BigUint {
    BigUint::from(x).pow(e as u32)
}

/// `count <= q^i |H|` for every tested fragment.
pub fn check_qspread(t: &Triangulation, q: Ratio<u64>, max_edges: usize) -> Result<SpreadReport> {
    let oracle = CopyOracle::new(t)?;
    let mut rep = SpreadReport::new("qspread", &oracle, t, &["q-spread"]);
    rep.parameters.insert("q".into(), q.to_string());
    rep.parameters.insert("max_fragment_edges".into(), max_edges.to_string());
    let h = BigUint::from(oracle.copy_count());
    for mask in oracle.fragments(max_edges) {
        let count = oracle.count_extensions(mask)?;
        let i = mask.count_ones() as usize;
        let ok = BigUint::from(count) * pow(*q.denom(), i) <= pow(*q.numer(), i) * &h;
        rep.record(0, ok, oracle.n, mask, count, || format!("({q})^{i} * {h}"));
        rep.observe(oracle.n, mask, count);
        rep.fragments += 1;
    }
    Ok(rep.finish())
}

/// `q`-spread plus `count <= q^i m^(-beta c_I) |H|` whenever `i <= delta m`.
pub fn check_superspread(
    t: &Triangulation,
    q: Ratio<u64>,
    beta: Ratio<u64>,
    delta: Ratio<u64>,
    max_edges: usize,
) -> Result<SpreadReport> {
    let oracle = CopyOracle::new(t)?;
    let mut rep = SpreadReport::new("superspread", &oracle, t, &["q-spread", "superspread"]);
    for (key, val) in [("q", q), ("beta", beta), ("delta", delta)] {
        rep.parameters.insert(key.into(), val.to_string());
    }
    rep.parameters.insert("max_fragment_edges".into(), max_edges.to_string());
    let m = oracle.m();
    let h = BigUint::from(oracle.copy_count());
    let (bn, bd) = (*beta.numer() as usize, *beta.denom() as usize);
    for mask in oracle.fragments(max_edges) {
        let count = oracle.count_extensions(mask)?;
        let i = mask.count_ones() as usize;
        let lhs = BigUint::from(count) * pow(*q.denom(), i);
        let rhs = pow(*q.numer(), i) * &h;
        rep.record(0, lhs <= rhs, oracle.n, mask, count, || format!("({q})^{i} * {h}"));
        if Ratio::from_integer(i as u64) <= delta * Ratio::from_integer(m as u64) {
            let (_, c) = shape(&mask_pairs(oracle.n, mask));
            // (count q_den^i)^bd * m^(bn c) <= (q_num^i |H|)^bd
            let ok = lhs.pow(bd as u32) * pow(m as u64, bn * c) <= rhs.pow(bd as u32);
            rep.record(1, ok, oracle.n, mask, count, || format!("({q})^{i} * {m}^(-{beta}*{c}) * {h}"));
        }
        rep.observe(oracle.n, mask, count);
        rep.fragments += 1;
    }
    Ok(rep.finish())
}

/// Level sizes `m, m/n^(1/5), m/n^(2/5), ..., m/n, 1`, floored and made
/// strictly decreasing.
pub fn default_levels(n: usize, m: usize) -> Vec<usize> {
    let mut levels: Vec<usize> =
        (0..=5).map(|j| (m as f64 / (n as f64).powf(j as f64 / 5.0)).floor().max(1.0) as usize).collect();
    levels.push(1);
    levels.dedup();
    levels
}

/// For every subgraph `A` of a copy with `levels[j] >= |A| >= levels[j+1]`
/// and every `i >= levels[j+1]`, `M_i(A) <= q^i |H|`, where `M_i(A)` counts
/// copies meeting `A` in at least `i` edges.
pub fn check_spiro_spread(
    t: &Triangulation,
    q: Ratio<u64>,
    levels: Option<Vec<usize>>,
    max_edges: usize,
) -> Result<SpreadReport> {
    let oracle = CopyOracle::new(t)?;
    let levels = levels.unwrap_or_else(|| default_levels(oracle.n, oracle.m()));
    if levels.is_empty() || levels.windows(2).any(|w| w[0] <= w[1]) || *levels.last().unwrap() < 1 {
        return Err(parameter(format!("levels must be strictly decreasing positive integers, got {levels:?}")));
    }
    let mut rep = SpreadReport::new("spiro", &oracle, t, &["spiro"]);
    rep.parameters.insert("q".into(), q.to_string());
    rep.parameters.insert("levels".into(), format!("{levels:?}"));
    rep.parameters.insert("max_fragment_edges".into(), max_edges.to_string());
    if levels[0] < oracle.m() {
        rep.notes.push(format!("copies have {} edges, above the first level {}", oracle.m(), levels[0]));
        rep.checks[0].violations += 1;
    }
    let h = BigUint::from(oracle.copy_count());
    for mask in oracle.fragments(max_edges) {
        let size = mask.count_ones() as usize;
        if size == 0 {
            continue;
        }
        let Some(j) = (0..levels.len() - 1).find(|&j| levels[j] >= size && size >= levels[j + 1]) else {
            continue;
        };
        let mut hist = vec![0u64; size + 1];
        for &c in oracle.copies() {
            hist[(c & mask).count_ones() as usize] += 1;
        }
        let mut at_least = 0u64;
        for i in (levels[j + 1]..=size).rev() {
            at_least += hist[i];
            let ok = BigUint::from(at_least) * pow(*q.denom(), i) <= pow(*q.numer(), i) * &h;
            rep.record(0, ok, oracle.n, mask, at_least, || format!("M_{i} <= ({q})^{i} * {h}"));
        }
        rep.fragments += 1;
    }
    Ok(rep.finish())
}

/// `Gamma(x + 1)` for `x = half / 2`, bracketed by rationals. Half-integer
/// values use `Gamma(m + 3/2) = (2m+2)! sqrt(pi) / (4^(m+1) (m+1)!)`.
fn gamma_bracket(half: i64) -> Option<(BigRational, BigRational)> {
    let sqrt_pi_lo = BigRational::new(BigInt::from(17724538509055160272u128), BigInt::from(10u128.pow(19)));
    let sqrt_pi_hi = BigRational::new(BigInt::from(17724538509055160273u128), BigInt::from(10u128.pow(19)));
    if half < -1 {
        return None;
    }
    if half % 2 == 0 {
        let f = BigRational::from_integer(BigInt::from(factorial((half / 2) as usize)));
        return Some((f.clone(), f));
    }
    if half == -1 {
        return Some((sqrt_pi_lo, sqrt_pi_hi));
    }
    let m = ((half - 1) / 2) as usize;
    let base = BigRational::new(
        BigInt::from(factorial(2 * m + 2)),
        BigInt::from(BigUint::from(4u32).pow(m as u32 + 1) * factorial(m + 1)),
    );
    Some((&base * sqrt_pi_lo, base * sqrt_pi_hi))
}

/// Components of `I` (as a subgraph of `T`) that contain a 4-clique.
fn clique_components(ctx: &FragmentContext, set: &crate::edgeset::EdgeSet) -> usize {
    ctx.components(set).iter().filter(|comp| ctx.params(comp).r > 0).count()
}

/// Compares exact extension counts with the analytic ceilings:
///
/// * general: `(2d)^i / |Aut| * (n - v + c)!` with `d = Δ(T)`;
/// * K4 construction: `10^i / |Aut| * s^(c4) * (n - v + c - c4)!`, `c4`
///   counting components that contain a 4-clique;
/// * wheels: `10^i ell^t * Gamma(n - i/2 - t/2 - (c - c_S)/2 + 1)`, for the
///   wheel-chain construction and the single wheel.
pub fn check_extension_bounds(t: &Triangulation, max_edges: usize) -> Result<SpreadReport> {
    let oracle = CopyOracle::new(t)?;
    let mut rep = SpreadReport::new("bounds", &oracle, t, &["general", "k4", "wheel"]);
    rep.parameters.insert("max_fragment_edges".into(), max_edges.to_string());
    let n = oracle.n;
    let d = t.max_degree() as u64;
    let s = t.s() as u64;
    rep.parameters.insert("d".into(), d.to_string());
    let aut = BigUint::from(oracle.aut);
    let k4_applies = oracle.regime == Regime::K4Sprinkle;
    let single_wheel = oracle.internal.len() == 1 && t.degree(oracle.internal[0]) == t.k();
    let wheel_applies = oracle.regime == Regime::WheelChain || single_wheel;
    let ell = oracle.internal.iter().map(|&u| t.degree(u)).max().unwrap_or(0) as u64;
    if !k4_applies {
        rep.notes.push("not a K4 construction: clique-component bound skipped".into());
    }
    if wheel_applies {
        rep.parameters.insert("ell".into(), ell.to_string());
    } else {
        rep.notes.push("not a wheel construction: wheel bound skipped".into());
    }
    let ctx = &oracle.ctx;
    for mask in oracle.fragments(max_edges) {
        let count = oracle.count_extensions(mask)?;
        let pairs = mask_pairs(n, mask);
        let edge_pairs: Vec<(Vertex, Vertex)> = pairs.iter().map(|&(a, b)| (a as Vertex, b as Vertex)).collect();
        let set = ctx.edge_set(&edge_pairs)?;
        let f = ctx.params(&set);
        let (i, v, c) = (f.i, f.v, f.c);
        let cnt = BigUint::from(count);

        let general = pow(2 * d, i) * factorial(n - v + c);
        rep.record(0, &cnt * &aut <= general, n, mask, count, || format!("(2*{d})^{i}/{aut} * ({})!", n - v + c));

        if k4_applies {
            let c4 = clique_components(ctx, &set);
            let bound = pow(10, i) * pow(s, c4) * factorial(n - v + c - c4);
            rep.record(1, &cnt * &aut <= bound, n, mask, count, || {
                format!("10^{i}/{aut} * {s}^{c4} * ({})!", n - v + c - c4)
            });
        }
        if wheel_applies {
            let half = 2 * n as i64 - i as i64 - f.t as i64 - (c - f.c_s) as i64;
            let scale = BigRational::from_integer(BigInt::from(pow(10, i) * pow(ell, f.t)));
            let lhs = BigRational::from_integer(BigInt::from(count));
            let ok = match gamma_bracket(half) {
                Some((lo, hi)) => {
                    if lhs <= &scale * lo {
                        true
                    } else if lhs > &scale * hi {
                        false
                    } else {
                        rep.notes.push(format!("wheel bound undecided for {pairs:?}"));
                        false
                    }
                }
                None => false,
            };
            rep.record(2, ok, n, mask, count, || format!("10^{i} * {ell}^{} * Gamma({}/2 + 1)", f.t, half));
        }
        rep.observe(n, mask, count);
        rep.fragments += 1;
    }
    Ok(rep.finish())
}

/// Spread predicted by the density route, `8 d e^(eps + 1/q) n^(-1/q)`,
/// with the unspecified constant factor set to 1.
pub fn density_route_spread(n: usize, d: usize, q: f64, eps: f64) -> f64 {
    8.0 * d as f64 * (eps + 1.0 / q).exp() * (n as f64).powf(-1.0 / q)
}
