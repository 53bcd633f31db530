//! Union bound on the expected number of spanning copies below threshold.

use serde::{Deserialize, Serialize};

use crate::error::{parameter, Result};
use crate::graph::edge_count;

/// `(1/12) n^{-1/(3 - k/n)}`.
pub fn critical_p(n: usize, k: usize) -> f64 {
    let alpha = k as f64 / n as f64;
    (n as f64).powf(-1.0 / (3.0 - alpha)) / 12.0
}

/// `ln n!`, summed exactly below 256 and by Stirling's series above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        return (2..=n).map(|j| (j as f64).ln()).sum();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub alpha: f64,
    pub p: f64,
    /// `ln(e n (n/e)^n (16 p)^m)`.
    pub log_bound_stirling: f64,
    /// `ln(n! 2^{4m} p^m)`, the bound before Stirling.
    pub log_bound: f64,
    /// The union bound is below one, so a copy is unlikely at `p`.
    pub negative: bool,
}

impl LowerBoundCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub fn lower_bound_certificate(n: usize, k: usize) -> Result<LowerBoundCertificate> {
    if k < 3 || k > n {
        return Err(parameter(format!("need 3 <= k <= n, got n = {n}, k = {k}")));
    }
    let m = edge_count(n, k);
    let p = critical_p(n, k);
    let (x, mf) = (n as f64, m as f64);
    let log_bound_stirling = 1.0 + x.ln() + x * (x.ln() - 1.0) + mf * (16.0 * p).ln();
    let log_bound = ln_factorial(n) + 4.0 * mf * std::f64::consts::LN_2 + mf * p.ln();
    Ok(LowerBoundCertificate { n, k, m, alpha: k as f64 / x, p, log_bound_stirling, log_bound, negative: log_bound < 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_value_and_endpoint() {
        let c = lower_bound_certificate(100, 50).unwrap();
        assert!((c.p - 0.013207).abs() < 1e-6);
        assert!(c.negative && c.log_bound <= c.log_bound_stirling);
        assert!((critical_p(400, 400) * 12.0 - 400f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn factorial_series_is_continuous() {
        let exact: f64 = (2..=300).map(|j| (j as f64).ln()).sum();
        assert!((ln_factorial(300) - exact).abs() < 1e-9);
    }

    #[test]
    fn large_n_is_linear_and_negative() {
        let a = lower_bound_certificate(1_000_000, 1000).unwrap();
        let b = lower_bound_certificate(2_000_000, 1000).unwrap();
        assert!(a.negative && b.negative);
        let ratio = b.log_bound / a.log_bound;
        assert!((1.9..2.1).contains(&ratio), "{ratio}");
    }
}
