//! Monte Carlo containment probabilities with Wilson intervals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::gnp::{check_probability, pair_uniforms, threshold_graph, trial_rng};
use super::search::{contains_copy, Pattern, SearchOutcome};
use crate::construct::auto_construct;
use crate::error::{parameter, Result};

/// Inconclusive searches above this share of trials flag an estimate.
pub const MAX_INCONCLUSIVE_RATE: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Search nodes per containment test.
    pub budget: u64,
    /// Fresh draws tried for a trial whose search ran out of budget.
    pub redraws: u32,
    /// Two-sided confidence level of the Wilson intervals.
    pub level: f64,
}

impl SimConfig {
    pub fn z(&self) -> f64 {
        Normal::standard().inverse_cdf(0.5 + self.level / 2.0)
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { budget: 5_000_000, redraws: 8, level: 0.95 }
    }
}

/// Outcome of one trial after redraws; `None` when every draw was
/// inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub contains: Option<bool>,
    pub inconclusive: u32,
}

/// Runs trials `range` at edge probability `p`. Trial `j` thresholds the
/// uniforms of stream `j`, so equal `(seed, j)` at two values of `p` sees
/// nested graphs. A redraw after an inconclusive search uses stream
/// `(attempt << 32) | j`.
pub fn run_trials(pat: &Pattern, p: f64, seed: u64, range: std::ops::Range<u64>, cfg: &SimConfig) -> Vec<TrialOutcome> {
    let n = pat.n();
    range
        .into_par_iter()
        .map(|j| {
            let mut inconclusive = 0;
            for attempt in 0..=cfg.redraws as u64 {
                let mut rng = trial_rng(seed, attempt << 32 | j);
                let g = threshold_graph(n, &pair_uniforms(n, &mut rng), p);
                let r = contains_copy(&g, pat, cfg.budget).expect("pattern and host sizes agree");
                match r.outcome {
                    SearchOutcome::Found(map) => {
                        assert!(pat.verify(&g, &map), "search witness failed to verify");
                        return TrialOutcome { contains: Some(true), inconclusive };
                    }
                    SearchOutcome::Absent => return TrialOutcome { contains: Some(false), inconclusive },
                    SearchOutcome::Inconclusive => inconclusive += 1,
                }
            }
            TrialOutcome { contains: None, inconclusive }
        })
        .collect()
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let ph = successes as f64 / t;
    let z2 = z * z;
    let centre = (ph + z2 / (2.0 * t)) / (1.0 + z2 / t);
    let half = z / (1.0 + z2 / t) * (ph * (1.0 - ph) / t + z2 / (4.0 * t * t)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentEstimate {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
    pub trials: u64,
    /// Trials with a decided outcome.
    pub decided: u64,
    pub successes: u64,
    /// Budget-capped searches, including those later redrawn.
    pub inconclusive_searches: u64,
    /// Trials dropped because every redraw was inconclusive.
    pub discarded: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub level: f64,
    pub unreliable: bool,
}

impl ContainmentEstimate {
    pub fn from_outcomes(n: usize, k: usize, p: f64, seed: u64, outcomes: &[TrialOutcome], level: f64) -> Self {
        let trials = outcomes.len() as u64;
        let decided = outcomes.iter().filter(|o| o.contains.is_some()).count() as u64;
        let successes = outcomes.iter().filter(|o| o.contains == Some(true)).count() as u64;
        let inconclusive_searches = outcomes.iter().map(|o| o.inconclusive as u64).sum();
        let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
        let (ci_lo, ci_hi) = wilson(successes, decided, z);
        ContainmentEstimate {
            n,
            k,
            p,
            seed,
            trials,
            decided,
            successes,
            inconclusive_searches,
            discarded: trials - decided,
            p_hat: if decided == 0 { f64::NAN } else { successes as f64 / decided as f64 },
            ci_lo,
            ci_hi,
            level,
            unreliable: inconclusive_searches as f64 > MAX_INCONCLUSIVE_RATE * trials as f64,
        }
    }

    /// The interval lies strictly on one side of 1/2.
    pub fn decisive(&self) -> bool {
        self.ci_hi < 0.5 || self.ci_lo > 0.5
    }
}

pub fn estimate_containment_prob(n: usize, k: usize, p: f64, trials: u64, seed: u64) -> Result<ContainmentEstimate> {
    estimate_containment_with(n, k, p, trials, seed, &SimConfig::default())
}

pub fn estimate_containment_with(
    n: usize,
    k: usize,
    p: f64,
    trials: u64,
    seed: u64,
    cfg: &SimConfig,
) -> Result<ContainmentEstimate> {
    check_probability(p)?;
    if trials == 0 {
        return Err(parameter("trials must be at least 1"));
    }
    let pat = Pattern::new(&auto_construct(n, k)?)?;
    let outcomes = run_trials(&pat, p, seed, 0..trials, cfg);
    Ok(ContainmentEstimate::from_outcomes(n, k, p, seed, &outcomes, cfg.level))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_matches_reference_values() {
        let z = SimConfig::default().z();
        assert!((z - 1.959964).abs() < 1e-6);
        let (lo, hi) = wilson(50, 100, z);
        assert!((lo - 0.40383).abs() < 1e-4 && (hi - 0.59617).abs() < 1e-4);
        let (lo, hi) = wilson(0, 20, z);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.16113).abs() < 1e-4);
    }

    #[test]
    fn extremes_are_certain() {
        let one = estimate_containment_prob(9, 4, 1.0, 20, 3).unwrap();
        assert_eq!((one.p_hat, one.successes), (1.0, 20));
        let zero = estimate_containment_prob(9, 4, 0.0, 20, 3).unwrap();
        assert_eq!(zero.p_hat, 0.0);
        assert!(zero.ci_hi < 0.5 && one.ci_lo > 0.5);
    }

    #[test]
    fn same_seed_same_estimate() {
        let a = estimate_containment_prob(10, 6, 0.5, 40, 11).unwrap();
        let b = estimate_containment_prob(10, 6, 0.5, 40, 11).unwrap();
        assert_eq!(a, b);
    }
}
