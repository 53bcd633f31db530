//! Bisection for the edge probability where containment crosses 1/2.

use serde::{Deserialize, Serialize};

use super::estimate::{run_trials, ContainmentEstimate, SimConfig, TrialOutcome};
use super::lowerbound::critical_p;
use super::search::Pattern;
use crate::construct::auto_construct;
use crate::error::{parameter, Error, Result};

/// Trials at an undecided probe grow by doubling up to this factor.
pub const MAX_ESCALATION: u64 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub p_hat_c: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub ci_method: String,
    pub level: f64,
    pub trials_per_probe: u64,
    pub trials_total: u64,
    pub seed: u64,
    pub tol: f64,
    /// Probes in the order they were run.
    pub probes: Vec<ContainmentEstimate>,
    pub unreliable: bool,
}

impl ThresholdEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serializes")
    }
}

struct Prober<'a> {
    pat: Pattern,
    n: usize,
    k: usize,
    seed: u64,
    trials: u64,
    cfg: &'a SimConfig,
    probes: Vec<ContainmentEstimate>,
}

impl Prober<'_> {
    /// Estimates at `p`, doubling the trial count while the interval still
    /// contains 1/2. Trial indices continue, so escalation only adds draws.
    fn probe(&mut self, p: f64) -> ContainmentEstimate {
        let mut outcomes: Vec<TrialOutcome> = Vec::new();
        let mut target = self.trials;
        loop {
            let have = outcomes.len() as u64;
            outcomes.extend(run_trials(&self.pat, p, self.seed, have..target, self.cfg));
            let est = ContainmentEstimate::from_outcomes(self.n, self.k, p, self.seed, &outcomes, self.cfg.level);
            if est.decisive() || target >= MAX_ESCALATION * self.trials {
                self.probes.push(est.clone());
                return est;
            }
            target *= 2;
        }
    }

    fn above(&mut self, p: f64) -> bool {
        self.probe(p).p_hat >= 0.5
    }
}

pub fn estimate_threshold(n: usize, k: usize, trials: u64, tol: f64, seed: u64) -> Result<ThresholdEstimate> {
    estimate_threshold_with(n, k, trials, tol, seed, &SimConfig::default())
}

/// Starts from the bracket `[p0, min(1, 10 p0)]` around the union-bound
/// probability `p0`, widening towards `[1/n^2, 1]`, then bisects until the
/// bracket is narrower than `tol`. All probes share `seed`, so their trials
/// are coupled and the estimates are monotone in `p`.
pub fn estimate_threshold_with(
    n: usize,
    k: usize,
    trials: u64,
    tol: f64,
    seed: u64,
    cfg: &SimConfig,
) -> Result<ThresholdEstimate> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(parameter("tol must be positive"));
    }
    if trials == 0 {
        return Err(parameter("trials must be at least 1"));
    }
    let t = auto_construct(n, k)?;
    let mut pr = Prober { pat: Pattern::new(&t)?, n, k, seed, trials, cfg, probes: Vec::new() };
    let floor = 1.0 / (n * n) as f64;
    let mut lo = critical_p(n, k).max(floor);
    let mut hi = (10.0 * lo).min(1.0);
    while pr.above(lo) {
        if lo <= floor {
            return Err(Error::Budget(format!("containment already {} at p = 1/n^2", pr.probes.last().unwrap().p_hat)));
        }
        hi = lo;
        lo = (lo / 4.0).max(floor);
    }
    while !pr.above(hi) {
        if hi >= 1.0 {
            return Err(Error::Budget("containment below 1/2 at p = 1".into()));
        }
        lo = hi;
        hi = (hi * 4.0).min(1.0);
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if pr.above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // decisive probes bound the crossing from each side
    let ci_lo = pr.probes.iter().filter(|e| e.ci_hi < 0.5).map(|e| e.p).fold(0.0, f64::max);
    let ci_hi = pr.probes.iter().filter(|e| e.ci_lo > 0.5).map(|e| e.p).fold(1.0, f64::min);
    Ok(ThresholdEstimate {
        n,
        k,
        alpha: k as f64 / n as f64,
        p_hat_c: 0.5 * (lo + hi),
        ci_lo,
        ci_hi,
        ci_method: "wilson-inversion".into(),
        level: cfg.level,
        trials_per_probe: trials,
        trials_total: pr.probes.iter().map(|e| e.trials).sum(),
        seed,
        tol,
        unreliable: pr.probes.iter().any(|e| e.unreliable),
        probes: pr.probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_threshold_is_bracketed_and_repeatable() {
        let a = estimate_threshold(8, 8, 60, 0.02, 5).unwrap();
        assert!(a.p_hat_c > 0.0 && a.p_hat_c < 1.0);
        assert!(a.ci_lo <= a.p_hat_c && a.p_hat_c <= a.ci_hi);
        let b = estimate_threshold(8, 8, 60, 0.02, 5).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(estimate_threshold(8, 8, 60, 0.0, 5).is_err());
        assert!(estimate_threshold(4, 5, 60, 0.1, 5).is_err());
    }
}
