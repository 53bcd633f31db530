//! Threshold estimates across `n` and a log-log exponent fit.

use serde::{Deserialize, Serialize};

use super::estimate::SimConfig;
use super::threshold::estimate_threshold_with;
use crate::error::{parameter, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum KRule {
    Fixed(usize),
    /// `k = ceil(alpha n)`.
    Alpha(f64),
    /// `k = n`.
    Full,
}

impl KRule {
    pub fn k(&self, n: usize) -> usize {
        match *self {
            KRule::Fixed(k) => k,
            KRule::Alpha(a) => ((a * n as f64).ceil() as usize).clamp(3, n),
            KRule::Full => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub p_hat_c: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials_total: u64,
    pub theory_exponent: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// `ln p_hat_c` minus the fitted line, per fitted row.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub fit: Option<ExponentFit>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "k", "alpha", "p_hat_c", "ci_lo", "ci_hi", "trials_total", "theory_exponent", "seed"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record(&[
                r.n.to_string(),
                r.k.to_string(),
                r.alpha.to_string(),
                r.p_hat_c.to_string(),
                r.ci_lo.to_string(),
                r.ci_hi.to_string(),
                r.trials_total.to_string(),
                r.theory_exponent.to_string(),
                r.seed.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serializes")
    }
}

/// Least-squares line through `(x, y)`; needs three points.
pub fn fit_line(points: &[(f64, f64)]) -> Option<ExponentFit> {
    if points.len() < 3 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = points.iter().map(|p| p.1 - intercept - slope * p.0).collect();
    Some(ExponentFit { slope, intercept, residuals })
}

/// One threshold estimate per `n`; a failed row keeps its error and the
/// sweep moves on.
pub fn sweep(n_list: &[usize], rule: KRule, trials: u64, tol: f64, seed: u64, cfg: &SimConfig) -> Result<SweepResult> {
    if n_list.is_empty() {
        return Err(parameter("empty n list"));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let k = rule.k(n);
        let alpha = k as f64 / n as f64;
        let theory_exponent = -1.0 / (3.0 - alpha);
        let row = match estimate_threshold_with(n, k, trials, tol, seed, cfg) {
            Ok(e) => SweepRow {
                n,
                k,
                alpha,
                p_hat_c: e.p_hat_c,
                ci_lo: e.ci_lo,
                ci_hi: e.ci_hi,
                trials_total: e.trials_total,
                theory_exponent,
                seed,
                error: None,
            },
            Err(err) => SweepRow {
                n,
                k,
                alpha,
                p_hat_c: f64::NAN,
                ci_lo: f64::NAN,
                ci_hi: f64::NAN,
                trials_total: 0,
                theory_exponent,
                seed,
                error: Some(err.to_string()),
            },
        };
        rows.push(row);
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| ((r.n as f64).ln(), r.p_hat_c.ln()))
        .collect();
    Ok(SweepResult { fit: fit_line(&points), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<(f64, f64)> = (1..6).map(|x| (x as f64, 2.0 - 0.5 * x as f64)).collect();
        let f = fit_line(&pts).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert!(fit_line(&pts[..2]).is_none());
    }

    #[test]
    fn k_rules() {
        assert_eq!(KRule::Alpha(0.5).k(9), 5);
        assert_eq!(KRule::Alpha(0.1).k(9), 3);
        assert_eq!(KRule::Full.k(9), 9);
        assert_eq!(KRule::Fixed(4).k(9), 4);
    }

    #[test]
    fn single_row_skips_the_fit() {
        let r = sweep(&[7], KRule::Full, 30, 0.05, 1, &SimConfig::default()).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.fit.is_none());
        assert!(r.to_csv().starts_with("n,k,alpha,p_hat_c,ci_lo,ci_hi,trials_total,theory_exponent,seed\n7,7,1,"));
        assert!(sweep(&[], KRule::Full, 30, 0.05, 1, &SimConfig::default()).is_err());
    }
}
