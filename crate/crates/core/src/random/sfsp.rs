use rayon::prelude::*;
use serde::Serialize;

use super::theta::{check_theta_sampled, check_theta_with_budget, DEFAULT_THETA_BUDGET};
use super::{chain_dims, random_graph, trial_seed};
use crate::error::{LabError, Result};

/// Samples per graph when an exact Θ_k check exceeds the budget.
const FALLBACK_SAMPLES: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundEval {
    pub k: usize,
    pub n: usize,
    pub value: f64,
    pub clamped: f64,
    /// The formula needs `⌊n/2⌋ ≥ 3k`; below that the bound is reported as 1.
    pub vacuous: bool,
}

fn ln_binomial(n: usize, r: usize) -> f64 {
    (0..r).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

fn miss_probability(k: usize) -> f64 {
    1.0 - (1.0f64 / 3.0).powi(3 * k as i32)
}

/// `ln C_m` for `C_m = C(m+1,k)·C(m+1-k,k)·C(m+1-2k,k)·q^{m-3k}` with
/// `q = 1 - 3^{-3k}`, taking `top = m + 1`; the even-size bound uses the
/// same shape with `top = m`.
fn ln_series_term(top: usize, exponent: usize, k: usize) -> f64 {
    ln_binomial(top, k)
        + ln_binomial(top - k, k)
        + ln_binomial(top - 2 * k, k)
        + exponent as f64 * miss_probability(k).ln()
}

/// Upper bound on the probability that a side-balanced random graph on `n`
/// vertices fails Θ_k: with `n = 2m` the binomials take `m`, with
/// `n = 2m + 1` they take `m + 1`; the exponent is `m - 3k` in both cases.
pub fn sfsp_bound(k: usize, n: usize) -> BoundEval {
    let m = n / 2;
    if m < 3 * k {
        return BoundEval { k, n, value: 1.0, clamped: 1.0, vacuous: true };
    }
    let top = if n.is_multiple_of(2) { m } else { m + 1 };
    let value = if k == 0 {
        // q = 0 and every binomial is 1; only the q^0 term survives.
        if m == 0 {
            2.0
        } else {
            0.0
        }
    } else {
        2.0 * ln_series_term(top, m - 3 * k, k).exp()
    };
    BoundEval { k, n, value, clamped: value.min(1.0), vacuous: false }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCheck {
    pub k: usize,
    /// `1 - 3^{-3k}`
    pub limit: f64,
    /// `m` of the first ratio.
    pub start_m: usize,
    /// `C_{m+1} / C_m` for `m = start_m ..= m_max`.
    pub ratios: Vec<f64>,
}

impl RatioCheck {
    pub fn final_ratio(&self) -> f64 {
        *self.ratios.last().expect("at least one ratio")
    }
}

pub fn bound_ratio_check(k: usize, m_max: usize) -> Result<RatioCheck> {
    if k == 0 {
        return Err(LabError::InvalidArgument("k must be at least 1".into()));
    }
    if m_max <= 3 * k {
        return Err(LabError::InvalidArgument(format!("m_max must exceed 3k = {}", 3 * k)));
    }
    let ln_c = |m: usize| ln_series_term(m + 1, m - 3 * k, k);
    let start_m = 3 * k;
    let ratios = (start_m..=m_max).map(|m| (ln_c(m + 1) - ln_c(m)).exp()).collect();
    Ok(RatioCheck { k, limit: miss_probability(k), start_m, ratios })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureEstimate {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    /// 95% normal-approximation half-width.
    pub half_width: f64,
    pub bound: f64,
    pub clamped_bound: f64,
    /// Some graphs were judged by sampling rather than exhaustive checking.
    pub sampled: bool,
}

/// Fraction of independently drawn graphs with `⌈n/2⌉` left and `⌊n/2⌋`
/// right vertices that fail Θ_k. Trial `t` uses `trial_seed(seed, t)`.
pub fn estimate_failure_prob(n: usize, k: usize, trials: u64, seed: u64) -> Result<FailureEstimate> {
    if trials == 0 {
        return Err(LabError::InvalidArgument("trials must be at least 1".into()));
    }
    let (m, r) = chain_dims(n);
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let g = random_graph(m, r, s);
            match check_theta_with_budget(&g, k, DEFAULT_THETA_BUDGET) {
                Ok(report) => Ok((!report.holds, false)),
                Err(LabError::BudgetExceeded(_)) => {
                    let est = check_theta_sampled(&g, k, FALLBACK_SAMPLES, s)?;
                    Ok((est.violations > 0, true))
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let failures = outcomes.iter().filter(|(f, _)| *f).count() as u64;
    let sampled = outcomes.iter().any(|(_, s)| *s);
    let p = failures as f64 / trials as f64;
    let half_width = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    let bound = sfsp_bound(k, n);
    Ok(FailureEstimate {
        n,
        k,
        trials,
        failures,
        failure_rate: p,
        half_width,
        bound: bound.value,
        clamped_bound: bound.clamped,
        sampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        let b = sfsp_bound(1, 8);
        assert!((b.value - 48.0 * 26.0 / 27.0).abs() < 1e-9);
        assert_eq!(b.clamped, 1.0);
        assert!(!b.vacuous);
        let b = sfsp_bound(1, 9);
        assert!((b.value - 120.0 * 26.0 / 27.0).abs() < 1e-9);
        for n in 0..6 {
            let b = sfsp_bound(1, n);
            assert!(b.vacuous && b.clamped == 1.0);
        }
        assert!(!sfsp_bound(1, 6).vacuous);
        assert!(sfsp_bound(2, 11).vacuous);
    }

    #[test]
    fn bound_decays() {
        let b = sfsp_bound(1, 4000);
        assert!(b.value < 1e-20 && b.value >= 0.0);
    }

    #[test]
    fn ratio_limits() {
        let r = bound_ratio_check(1, 10_000).unwrap();
        assert!((r.limit - 26.0 / 27.0).abs() < 1e-15);
        assert!((r.final_ratio() - 26.0 / 27.0).abs() < 1e-3);
        assert_eq!(r.ratios.len(), 10_000 - 3 + 1);
        let r = bound_ratio_check(2, 10_000).unwrap();
        assert!((r.limit - 728.0 / 729.0).abs() < 1e-15);
        assert!((r.final_ratio() - 728.0 / 729.0).abs() < 1e-3);
        assert!(bound_ratio_check(1, 3).is_err());
        assert!(bound_ratio_check(0, 10).is_err());
    }

    #[test]
    fn tiny_graphs_always_fail() {
        let e = estimate_failure_prob(4, 1, 1000, 0).unwrap();
        assert_eq!(e.failure_rate, 1.0);
        assert_eq!(e.half_width, 0.0);
        assert!(!e.sampled);
        assert_eq!(e, estimate_failure_prob(4, 1, 1000, 0).unwrap());
    }
}
