//! Binomial random graphs with coupled, per-trial reproducible randomness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{parameter, Result};

/// Simple graph on `0..n` as adjacency bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
        self.bits[b * self.words + a / 64] |= 1 << (a % 64);
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }
}

/// The generator for trial `trial` under `seed`: one ChaCha stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One uniform per pair `a < b`, in row-major pair order.
pub fn pair_uniforms(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n * n.saturating_sub(1) / 2).map(|_| rng.random::<f64>()).collect()
}

/// The graph keeping pair `j` iff `uniforms[j] < p`. Shared uniforms make
/// the graphs nested in `p`.
pub fn threshold_graph(n: usize, uniforms: &[f64], p: f64) -> BitGraph {
    let mut g = BitGraph::empty(n);
    let mut j = 0;
    for a in 0..n {
        for b in a + 1..n {
            if uniforms[j] < p {
                g.add_edge(a, b);
            }
            j += 1;
        }
    }
    g
}

pub fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(parameter(format!("p = {p} is not a probability")));
    }
    Ok(())
}

/// `G(n, p)` for trial 0 of `seed`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<BitGraph> {
    check_probability(p)?;
    let mut rng = trial_rng(seed, 0);
    Ok(threshold_graph(n, &pair_uniforms(n, &mut rng), p))
}
